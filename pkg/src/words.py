"""
Binary words and the locally balanced constraint predicates.

A word is indexed x_1..x_n as in the usual notation; Python indexing on
``Word`` itself stays 0-based, and only ``window`` takes the 1-based start.
Integer encodings of words put x_1 in the most significant bit.
"""
from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable, Iterator, Tuple, Union

import numpy as np

from .errors import ParameterError, WindowRangeError

_CHUNK_ROWS = 1 << 16


@dataclass(frozen=True, order=True)
class Word:
    bits: Tuple[int, ...] = ()

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ParameterError(f"Word symbols must be 0 or 1, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_int(cls, value: int, n: int) -> "Word":
        if value < 0 or value >> n:
            raise ParameterError(f"{value} does not fit in {n} bits")
        return cls(tuple((value >> (n - 1 - i)) & 1 for i in range(n)))

    @classmethod
    def zeros(cls, n: int) -> "Word":
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.bits)

    def to_int(self) -> int:
        value = 0
        for b in self.bits:
            value = (value << 1) | b
        return value

    def to_array(self) -> np.ndarray:
        return np.fromiter(self.bits, dtype=np.uint8, count=len(self.bits))

    def blocks(self, size: int) -> Iterator["Word"]:
        for start in range(0, len(self.bits), size):
            yield Word(self.bits[start:start + size])

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return Word(self.bits[key])
        return self.bits[key]

    def __add__(self, other: "Word") -> "Word":
        return Word(self.bits + tuple(other))

    def __str__(self) -> str:
        return "".join(map(str, self.bits))

    def __repr__(self) -> str:
        return f"Word('{self}')"


WordLike = Union[Word, str, Iterable[int]]


def as_word(w: WordLike) -> Word:
    return w if isinstance(w, Word) else Word(tuple(w))


@dataclass(frozen=True)
class ConstraintParams:
    ell: int
    delta: int

    def __post_init__(self):
        if self.ell < 2 or self.ell % 2:
            raise ParameterError(f"ell must be an even integer >= 2, got {self.ell}")
        if self.delta < 1:
            raise ParameterError(f"delta must be >= 1, got {self.delta}")

    @property
    def low(self) -> int:
        return self.ell // 2 - self.delta

    @property
    def high(self) -> int:
        return self.ell // 2 + self.delta

    def __str__(self) -> str:
        return f"({self.ell},{self.delta})"


@dataclass(frozen=True)
class RdsSequence:
    values: Tuple[int, ...]

    def __post_init__(self):
        values = tuple(self.values)
        if not values or values[0] != 0:
            raise ParameterError("an RDS sequence starts at s_0 = 0")
        if any(abs(b - a) != 1 for a, b in zip(values, values[1:])):
            raise ParameterError("consecutive RDS entries differ by exactly 1")
        object.__setattr__(self, "values", values)

    @property
    def n(self) -> int:
        return len(self.values) - 1

    @property
    def max(self) -> int:
        return max(self.values)

    @property
    def min(self) -> int:
        return min(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)


def weight(w: Word) -> int:
    return sum(w.bits)


def window(w: Word, i: int, ell: int) -> Word:
    """x[i;ell], the length-ell subword starting at 1-based coordinate i"""
    if ell < 1 or i < 1 or i > len(w) - ell + 1:
        raise WindowRangeError(f"window x[{i};{ell}] is outside a word of length {len(w)}")
    return w[i - 1:i - 1 + ell]


def rds(w: Word) -> RdsSequence:
    return RdsSequence(tuple(accumulate((2 * b - 1 for b in w.bits), initial=0)))


def dis(w: Word) -> int:
    seq = rds(w)
    return seq.max - seq.min


def complement(w: Word) -> Word:
    return Word(tuple(1 - b for b in w.bits))


def _prefix_weights(w: Word):
    return list(accumulate(w.bits, initial=0))


def _windows_within(prefix, n: int, ell: int, low: int, high: int) -> bool:
    return all(low <= prefix[i + ell] - prefix[i] <= high for i in range(n - ell + 1))


def is_locally_balanced(w: Word, p: ConstraintParams) -> bool:
    n = len(w)
    if n < p.ell:
        return True
    return _windows_within(_prefix_weights(w), n, p.ell, p.low, p.high)


def is_strongly_locally_balanced(w: Word, p: ConstraintParams) -> bool:
    # Checks every even window length directly; dis is deliberately not used.
    n = len(w)
    prefix = _prefix_weights(w)
    for ell in range(p.ell, n + 1, 2):
        half = ell // 2
        if not _windows_within(prefix, n, ell, half - p.delta, half + p.delta):
            return False
    return True


def popcount(codes: np.ndarray) -> np.ndarray:
    as_bytes = np.ascontiguousarray(codes, dtype=np.uint64).reshape(-1).view(np.uint8)
    return np.unpackbits(as_bytes.reshape(-1, 8), axis=1).sum(axis=1, dtype=np.int64)


def bit_matrix(codes: np.ndarray, n: int) -> np.ndarray:
    """Row r holds the n bits of codes[r], column j being x_{j+1}"""
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((np.asarray(codes, dtype=np.int64)[:, None] >> shifts) & 1).astype(np.int16)


def balanced_mask(codes: np.ndarray, n: int, p: ConstraintParams) -> np.ndarray:
    """Vectorized ``is_locally_balanced`` over integer-encoded words of length n"""
    codes = np.asarray(codes, dtype=np.int64).reshape(-1)
    if n < p.ell:
        return np.ones(codes.shape[0], dtype=bool)
    out = np.empty(codes.shape[0], dtype=bool)
    for start in range(0, codes.shape[0], _CHUNK_ROWS):
        chunk = codes[start:start + _CHUNK_ROWS]
        prefix = np.zeros((chunk.shape[0], n + 1), dtype=np.int16)
        prefix[:, 1:] = np.cumsum(bit_matrix(chunk, n), axis=1)
        weights = prefix[:, p.ell:] - prefix[:, :-p.ell]
        out[start:start + chunk.shape[0]] = ((weights >= p.low) & (weights <= p.high)).all(axis=1)
    return out
