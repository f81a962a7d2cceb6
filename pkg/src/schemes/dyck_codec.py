"""
Block code over bounded Dyck paths.

Each s-bit message block becomes an m-bit path of +1/-1 steps (bit 1 is an
up-step) chosen so that the running digital sum of the whole output stays in
the band [-1, 2]. The output therefore has dis <= 3 and is strongly
(4,1)-locally balanced.

Only two tables are stored: paths starting on layer 2 (boundary) and on
layer 1 (interior). Layers -1 and 0 use the complemented entries, since
complementing a path maps layer k to 1 - k.
"""
import logging
from dataclasses import dataclass, field
from itertools import islice
from typing import Dict, Iterator, List, Optional, Tuple

from ..errors import CorruptionError, CountOverflowError, FramingError, ParameterError
from ..words import Word, complement, weight
from .base import BlockScheme, StreamEncoder

logger = logging.getLogger(__name__)

LOW, HIGH = -1, 2
LAYERS = tuple(range(LOW, HIGH + 1))
INT64_MAX = (1 << 63) - 1


def fib(k: int) -> int:
    """Fibonacci number with F_1 = F_2 = 1, limited to the signed 64-bit range"""
    if k < 1:
        raise ParameterError(f"Fibonacci index must be >= 1, got {k}")
    a, b = 1, 1
    for _ in range(k - 1):
        a, b = b, a + b
    if a > INT64_MAX:
        raise CountOverflowError(f"F_{k} does not fit in 64 bits", k)
    return a


def _check_layer(layer: int):
    if layer not in LAYERS:
        raise ParameterError(f"layer {layer} is outside the band [{LOW}, {HIGH}]")


def count_bounded_paths(start_layer: int, m: int) -> int:
    """Number of m-step paths from start_layer that never leave [-1, 2]"""
    _check_layer(start_layer)
    if m < 1:
        raise ParameterError(f"path length must be >= 1, got {m}")
    # paths[k] = number of continuations of the remaining length from layer k
    paths = {layer: 1 for layer in LAYERS}
    for _ in range(m):
        paths = {
            layer: paths.get(layer - 1, 0) + paths.get(layer + 1, 0)
            for layer in LAYERS
        }
    return paths[start_layer]


def bounded_paths(start_layer: int, m: int) -> Iterator[Word]:
    """All m-step bounded paths from start_layer, in lexicographic order"""
    _check_layer(start_layer)

    def extend(prefix: Tuple[int, ...], level: int):
        if len(prefix) == m:
            yield Word(prefix)
            return
        for bit in (0, 1):
            nxt = level + 2 * bit - 1
            if LOW <= nxt <= HIGH:
                yield from extend(prefix + (bit,), nxt)

    yield from extend((), start_layer)


def min_block_length(s: int) -> int:
    """Smallest m with p(m) = F_{m+1} >= 2^s; q(m) >= p(m) makes p decisive"""
    if s < 1:
        raise ParameterError(f"s must be >= 1, got {s}")
    m = 1
    while fib(m + 1) < (1 << s):
        m += 1
    return m


def rate_table(s_values) -> List[Tuple[int, int, float]]:
    rows = []
    for s in s_values:
        m = min_block_length(s)
        rows.append((s, m, s / m))
    return rows


@dataclass(frozen=True)
class DyckCodebook:
    s: int
    m: int
    boundary_table: Tuple[Word, ...]
    interior_table: Tuple[Word, ...]
    boundary_index: Dict[Word, int] = field(init=False, repr=False, compare=False)
    interior_index: Dict[Word, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        size = 1 << self.s
        for name, table in (("boundary", self.boundary_table), ("interior", self.interior_table)):
            if len(table) != size:
                raise ParameterError(f"{name} table holds {len(table)} paths, expected {size}")
        object.__setattr__(self, "boundary_index", {w: i for i, w in enumerate(self.boundary_table)})
        object.__setattr__(self, "interior_index", {w: i for i, w in enumerate(self.interior_table)})

    def path(self, level: int, index: int) -> Word:
        if level == 2:
            return self.boundary_table[index]
        if level == 1:
            return self.interior_table[index]
        if level == 0:
            return complement(self.interior_table[index])
        if level == -1:
            return complement(self.boundary_table[index])
        raise CorruptionError(f"RDS level {level} left the band [{LOW}, {HIGH}]")

    def index(self, level: int, block: Word) -> Optional[int]:
        if level == 2:
            return self.boundary_index.get(block)
        if level == 1:
            return self.interior_index.get(block)
        if level == 0:
            return self.interior_index.get(complement(block))
        if level == -1:
            return self.boundary_index.get(complement(block))
        return None


def build_codebook(s: int) -> DyckCodebook:
    m = min_block_length(s)
    size = 1 << s
    boundary = tuple(islice(bounded_paths(2, m), size))
    interior = tuple(islice(bounded_paths(1, m), size))
    logger.info(f"Dyck codebook s={s} m={m}: {size} entries per table")
    return DyckCodebook(s=s, m=m, boundary_table=boundary, interior_table=interior)


class DyckEncoder(StreamEncoder):
    def __init__(self, codebook: DyckCodebook, start_level: int = 0):
        _check_layer(start_level)
        self.codebook = codebook
        self.level = start_level

    def feed(self, msg: Word) -> Word:
        cb = self.codebook
        if len(msg) % cb.s:
            raise FramingError(f"message length {len(msg)} is not a multiple of s={cb.s}")
        out: List[int] = []
        for block in msg.blocks(cb.s):
            path = cb.path(self.level, block.to_int())
            self.level += 2 * weight(path) - cb.m
            out.extend(path.bits)
        return Word(tuple(out))


def encode_dyck(msg: Word, cb: DyckCodebook, start_level: int = 0) -> Word:
    return DyckEncoder(cb, start_level).feed(msg)


def decode_dyck(code: Word, cb: DyckCodebook, start_level: int = 0) -> Word:
    _check_layer(start_level)
    if len(code) % cb.m:
        raise CorruptionError(f"code length {len(code)} is not a multiple of m={cb.m}")
    level = start_level
    out: List[int] = []
    for k, block in enumerate(code.blocks(cb.m)):
        index = cb.index(level, block)
        if index is None:
            raise CorruptionError(f"block {k} ({block}) is not a valid path from level {level}")
        out.extend(Word.from_int(index, cb.s).bits)
        level += 2 * weight(block) - cb.m
    return Word(tuple(out))


class DyckScheme(BlockScheme):
    scheme_id = 1
    name = "dyck"

    def __init__(self, codebook: DyckCodebook):
        self.codebook = codebook

    @property
    def message_block(self) -> int:
        return self.codebook.s

    @property
    def code_block(self) -> int:
        return self.codebook.m

    def encoder(self) -> StreamEncoder:
        return DyckEncoder(self.codebook)

    def decode(self, code: Word) -> Word:
        return decode_dyck(code, self.codebook)
