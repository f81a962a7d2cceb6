from itertools import product

import numpy as np
import pytest

from src.errors import CorruptionError, CountOverflowError, FramingError, ParameterError
from src.schemes.dyck_codec import (
    DyckScheme, bounded_paths, build_codebook, count_bounded_paths, decode_dyck, encode_dyck,
    fib, min_block_length, rate_table,
)
from src.words import ConstraintParams, Word, bit_matrix, complement, dis, is_strongly_locally_balanced, rds

P41 = ConstraintParams(4, 1)

RATE_TABLE = [
    (2, 4), (3, 5), (4, 7), (5, 8), (6, 10), (7, 11), (8, 13),
    (9, 14), (10, 16), (11, 17), (12, 18), (13, 20), (14, 21), (15, 23),
]


@pytest.mark.parametrize("k, expected", [(1, 1), (2, 1), (6, 8), (19, 4181)])
def test_fib(k, expected):
    assert fib(k) == expected


def test_fib_limits():
    with pytest.raises(ParameterError):
        fib(0)
    assert fib(92) == 7540113804746346429
    with pytest.raises(CountOverflowError):
        fib(93)


@pytest.mark.parametrize("layer, m, expected", [(2, 5, 8), (2, 1, 1), (1, 3, 5)])
def test_count_bounded_paths_examples(layer, m, expected):
    assert count_bounded_paths(layer, m) == expected


def _exhaustive_paths(m):
    """Walks of every m-bit word from each start layer, counted when they stay in [-1, 2]"""
    steps = 2 * bit_matrix(np.arange(1 << m, dtype=np.int64), m).astype(np.int8) - 1
    levels = np.cumsum(steps, axis=1, dtype=np.int8)
    low, high = levels.min(axis=1), levels.max(axis=1)
    return {layer: int(np.count_nonzero((layer + low >= -1) & (layer + high <= 2))) for layer in (-1, 0, 1, 2)}


@pytest.mark.parametrize("m", range(1, 21))
def test_count_bounded_paths_against_enumeration(m):
    for layer, expected in _exhaustive_paths(m).items():
        assert count_bounded_paths(layer, m) == expected


def test_path_counts_are_fibonacci():
    for m in range(1, 26):
        assert count_bounded_paths(2, m) == fib(m + 1)
        assert count_bounded_paths(-1, m) == fib(m + 1)
        assert count_bounded_paths(1, m) == fib(m + 2)
        assert count_bounded_paths(0, m) == fib(m + 2)


@pytest.mark.parametrize("s, m", RATE_TABLE)
def test_min_block_length_reproduces_rate_table(s, m):
    assert min_block_length(s) == m


def test_rate_table_rows():
    rows = rate_table([3, 12])
    assert rows[0] == (3, 5, pytest.approx(0.6))
    assert rows[1][:2] == (12, 18)
    assert round(rows[1][2], 3) == 0.667


def test_bounded_paths_sorted_and_bounded():
    paths = list(bounded_paths(2, 7))
    assert paths == sorted(paths)
    assert len(paths) == fib(8)
    for path in paths:
        levels = [2 + v for v in rds(path).values]
        assert min(levels) >= -1 and max(levels) <= 2


def test_build_codebook_small():
    cb = build_codebook(1)
    assert cb.m == 2
    assert cb.boundary_table == (Word("00"), Word("01"))
    cb3 = build_codebook(3)
    assert cb3.m == 5
    assert len(cb3.boundary_table) == len(cb3.interior_table) == 8
    assert len(set(cb3.interior_table)) == 8


def test_encode_empty_and_framing():
    cb = build_codebook(3)
    assert encode_dyck(Word(), cb) == Word()
    assert decode_dyck(Word(), cb) == Word()
    with pytest.raises(FramingError):
        encode_dyck(Word("10"), cb)


def test_decode_rejects_unbounded_block():
    cb = build_codebook(3)
    # first block ends on level 1, from where 11111 climbs out of the band
    first = encode_dyck(Word("000"), cb)
    with pytest.raises(CorruptionError):
        decode_dyck(first + Word("11111"), cb)
    with pytest.raises(CorruptionError):
        decode_dyck(Word("1111"), cb)


def test_mirrored_start_level_complements_output():
    cb = build_codebook(4)
    rng = np.random.default_rng(3)
    for _ in range(200):
        msg = Word(tuple(rng.integers(0, 2, size=4 * int(rng.integers(1, 8)))))
        mirrored = encode_dyck(msg, cb, start_level=1)
        assert mirrored == complement(encode_dyck(msg, cb))
        assert decode_dyck(mirrored, cb, start_level=1) == msg


def test_random_roundtrip_and_balance():
    rng = np.random.default_rng(2024)
    codebooks = {s: build_codebook(s) for s in range(1, 9)}
    for _ in range(10_000):
        s = int(rng.integers(1, 9))
        cb = codebooks[s]
        msg = Word(tuple(rng.integers(0, 2, size=s * int(rng.integers(1, 5)))))
        code = encode_dyck(msg, cb)
        assert len(code) == len(msg) // s * cb.m
        assert decode_dyck(code, cb) == msg
        assert dis(code) <= 3


def test_codewords_strongly_balanced():
    cb = build_codebook(3)
    for bits in product((0, 1), repeat=9):
        code = encode_dyck(Word(bits), cb)
        assert is_strongly_locally_balanced(code, P41)


def test_scheme_interface():
    scheme = DyckScheme(build_codebook(3))
    enc = scheme.encoder()
    msg = Word("101110001")
    streamed = enc.feed(msg[:3]) + enc.feed(msg[3:]) + enc.finish()
    assert streamed == scheme.encode(msg)
    assert scheme.decode(streamed) == msg
    assert scheme.coded_length(9) == 15
