"""
Block codes over the concatenation graph G_m.

Vertices of G_m are the (ell, delta)-balanced m-bit words and u -> v is an
edge iff the 2m-bit word uv is balanced. Since m >= ell-1, only the windows
crossing the block boundary matter, and those depend on the last ell-1 bits
of u and the first ell-1 bits of v alone; edges are stored as a link matrix
between these classes.

A subgraph in which every vertex keeps at least 2^s successors yields an
encoder with s message bits per m-bit block: the first block picks one of
2^s start vertices, every later block picks one of 2^s successors of the
previous vertex.
"""
import logging
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterator, List, NamedTuple, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sps

from ..constraint_graph import ConstraintGraph
from ..errors import CorruptionError, FramingError, HeaderError, NoCodeError, ParameterError
from ..words import ConstraintParams, Word, balanced_mask, bit_matrix
from .base import BlockScheme, StreamEncoder

logger = logging.getLogger(__name__)

CODEBOOK_MAGIC = b"LBG1"
CODEBOOK_HEADER = struct.Struct(">4sHHHHQ")


def boundary_link(p: ConstraintParams) -> np.ndarray:
    """link[a, b] is True iff tail class a may be followed by head class b.

    Both classes are (ell-1)-bit words. The j-th crossing window takes the
    last ell-1-j bits of a and the first j+1 bits of b.
    """
    width = p.ell - 1
    classes = np.arange(1 << width, dtype=np.int64)
    bits = bit_matrix(classes, width)
    prefix = np.zeros((classes.shape[0], width + 1), dtype=np.int16)
    prefix[:, 1:] = np.cumsum(bits, axis=1)
    suffix = prefix[:, -1:] - prefix
    link = np.ones((classes.shape[0], classes.shape[0]), dtype=bool)
    for j in range(width):
        crossing = suffix[:, j][:, None] + prefix[:, j + 1][None, :]
        link &= (crossing >= p.low) & (crossing <= p.high)
    return link


def build_graph(p: ConstraintParams, m: int) -> ConstraintGraph:
    width = p.ell - 1
    if m < width:
        raise ParameterError(f"block length m={m} must be at least ell-1={width}")
    codes = np.arange(1 << m, dtype=np.int64)
    vertices = codes[balanced_mask(codes, m, p)]
    tails = vertices & ((1 << width) - 1)
    heads = vertices >> (m - width)
    graph = ConstraintGraph(
        m=m, params=p, vertices=vertices, tails=tails, heads=heads,
        link=sps.csr_matrix(boundary_link(p)),
    )
    logger.info(f"G_{m} for {p}: {len(graph)} vertices, {graph.edge_count()} edges")
    return graph


@dataclass(frozen=True, eq=False)
class Subgraph:
    graph: ConstraintGraph
    alive: np.ndarray

    def __post_init__(self):
        alive = np.array(self.alive, dtype=bool)
        alive.flags.writeable = False
        object.__setattr__(self, "alive", alive)

    def __len__(self) -> int:
        return int(self.alive.sum())

    @property
    def is_empty(self) -> bool:
        return not self.alive.any()

    @property
    def indices(self) -> np.ndarray:
        return np.flatnonzero(self.alive)

    def out_degrees(self) -> np.ndarray:
        """Out-degrees inside the subgraph, one per surviving vertex"""
        return self.graph.out_degrees(self.alive)[self.alive]

    def min_out_degree(self) -> int:
        return int(self.out_degrees().min()) if len(self) else 0


def peel(g: ConstraintGraph, threshold: int, alive: Optional[np.ndarray] = None) -> np.ndarray:
    """Delete vertices with fewer than ``threshold`` surviving successors until none are left to delete"""
    alive = np.ones(len(g), dtype=bool) if alive is None else alive.copy()
    rounds = 0
    while True:
        drop = alive & (g.out_degrees(alive) < threshold)
        if not drop.any():
            break
        alive &= ~drop
        rounds += 1
    logger.debug(f"peeling at threshold {threshold}: {int(alive.sum())} vertices left after {rounds} rounds")
    return alive


def find_max_subgraph(g: ConstraintGraph) -> Tuple[Subgraph, int]:
    """Largest s such that peeling below 2^s leaves a nonempty subgraph.

    Returns the empty subgraph and s = 0 when even s = 0 empties the graph.
    """
    degrees = g.out_degrees()
    max_degree = int(degrees.max()) if len(g) else 0
    s = max_degree.bit_length() - 1
    while s >= 0:
        alive = peel(g, 1 << s)
        if alive.any():
            logger.info(f"m={g.m}: s={s} with {int(alive.sum())} of {len(g)} vertices")
            return Subgraph(g, alive), s
        logger.debug(f"m={g.m}: subgraph empties at s={s}")
        s -= 1
    logger.info(f"m={g.m}: no subgraph with out-degree >= 1")
    return Subgraph(g, np.zeros(len(g), dtype=bool)), 0


@dataclass(frozen=True, eq=False)
class GraphCodebook:
    """Encoding tables over the surviving vertices, addressed by position.

    ``vertices`` holds the surviving codes in increasing order. The edge map
    of a vertex depends only on its tail class, so distinct maps are kept once
    in ``rows`` and ``row_of[position]`` selects the one a vertex uses.
    """
    params: ConstraintParams
    m: int
    s: int
    vertices: np.ndarray
    rows: np.ndarray
    row_of: np.ndarray
    _position: Dict[int, int] = field(init=False, repr=False)
    _inverse_rows: List[Dict[int, int]] = field(init=False, repr=False)

    def __post_init__(self):
        size = 1 << self.s
        if self.vertices.shape[0] < size:
            raise ParameterError(f"{self.vertices.shape[0]} vertices cannot carry {size} start blocks")
        if self.rows.ndim != 2 or self.rows.shape[1] != size:
            raise ParameterError(f"edge maps must have {size} entries each")
        if self.row_of.shape[0] != self.vertices.shape[0]:
            raise ParameterError("every vertex needs an edge map")
        object.__setattr__(self, "_position", {int(v): i for i, v in enumerate(self.vertices)})
        object.__setattr__(self, "_inverse_rows", [
            {int(pos): k for k, pos in enumerate(row)} for row in self.rows
        ])

    @property
    def size(self) -> int:
        return 1 << self.s

    @property
    def initial_map(self) -> List[Word]:
        return [Word.from_int(int(v), self.m) for v in self.vertices[:self.size]]

    def vertex(self, position: int) -> Word:
        return Word.from_int(int(self.vertices[position]), self.m)

    def edge_map(self, position: int) -> np.ndarray:
        return self.rows[self.row_of[position]]

    def position(self, block: Word) -> Optional[int]:
        return self._position.get(block.to_int())

    def successor(self, position: Optional[int], index: int) -> int:
        if position is None:
            return index
        return int(self.rows[self.row_of[position], index])

    def index_of(self, position: Optional[int], target: int) -> Optional[int]:
        """Inverse of ``successor``"""
        if position is None:
            return target if target < self.size else None
        return self._inverse_rows[self.row_of[position]].get(target)

    def check_closure(self) -> List[str]:
        problems = []
        if self.rows.size and (self.rows.min() < 0 or self.rows.max() >= self.vertices.shape[0]):
            problems.append("edge maps point outside the vertex list")
        if np.any(np.diff(self.vertices) <= 0):
            problems.append("vertices are not strictly increasing")
        for r, row in enumerate(self.rows):
            if np.unique(row).shape[0] != row.shape[0]:
                problems.append(f"edge map {r} repeats a successor")
        return problems


def build_codebook(subgraph: Subgraph, s: int) -> GraphCodebook:
    g = subgraph.graph
    size = 1 << s
    if subgraph.is_empty:
        raise ParameterError("cannot build a codebook from an empty subgraph")
    if g.params is None:
        raise ParameterError("codebooks need a graph built from constraint parameters")
    positions = subgraph.indices
    vertices = g.vertices[positions]
    sub_heads = g.heads[positions]
    tail_classes, row_of = np.unique(g.tails[positions], return_inverse=True)
    rows = np.empty((tail_classes.shape[0], size), dtype=np.int64)
    for r, tail in enumerate(tail_classes):
        allowed = g.link.getrow(int(tail)).toarray().ravel()
        successors = np.flatnonzero(allowed[sub_heads] != 0)
        if successors.shape[0] < size:
            raise ParameterError(
                f"tail class {int(tail)} has {successors.shape[0]} successors, fewer than 2^{s}"
            )
        rows[r] = successors[:size]
    logger.info(f"codebook {g.params} m={g.m} s={s}: {vertices.shape[0]} vertices, {rows.shape[0]} distinct edge maps")
    return GraphCodebook(
        params=g.params, m=g.m, s=s, vertices=vertices, rows=rows, row_of=row_of.reshape(-1)
    )


class GraphEncoder(StreamEncoder):
    def __init__(self, codebook: GraphCodebook):
        self.codebook = codebook
        self.current: Optional[int] = None

    def feed(self, msg: Word) -> Word:
        cb = self.codebook
        if len(msg) % cb.s:
            raise FramingError(f"message length {len(msg)} is not a multiple of s={cb.s}")
        out: List[int] = []
        for block in msg.blocks(cb.s):
            self.current = cb.successor(self.current, block.to_int())
            out.extend(cb.vertex(self.current).bits)
        return Word(tuple(out))


def encode_graph(msg: Word, cb: GraphCodebook) -> Word:
    return GraphEncoder(cb).feed(msg)


def decode_graph(code: Word, cb: GraphCodebook) -> Word:
    if len(code) % cb.m:
        raise CorruptionError(f"code length {len(code)} is not a multiple of m={cb.m}")
    previous: Optional[int] = None
    out: List[int] = []
    for k, block in enumerate(code.blocks(cb.m)):
        target = cb.position(block)
        if target is None:
            raise CorruptionError(f"block {k} ({block}) is not a codebook vertex")
        index = cb.index_of(previous, target)
        if index is None:
            where = "a start vertex" if previous is None else f"an enabled successor of {cb.vertex(previous)}"
            raise CorruptionError(f"block {k} ({block}) is not {where}")
        out.extend(Word.from_int(index, cb.s).bits)
        previous = target
    return Word(tuple(out))


class BlockSearch(NamedTuple):
    m: int
    s: int
    codebook: GraphCodebook

    @property
    def rate(self) -> Fraction:
        return Fraction(self.s, self.m)


def block_rates(p: ConstraintParams, m_min: int, m_max: int) -> Iterator[Tuple[int, int, Subgraph]]:
    if m_min < p.ell - 1 or m_max < m_min:
        raise ParameterError(f"block range {m_min}..{m_max} must satisfy {p.ell - 1} <= m_min <= m_max")
    for m in range(m_min, m_max + 1):
        subgraph, s = find_max_subgraph(build_graph(p, m))
        yield m, s, subgraph


def search_best_block(p: ConstraintParams, m_min: int, m_max: int) -> BlockSearch:
    best: Optional[Tuple[Fraction, int, int, Subgraph]] = None
    for m, s, subgraph in block_rates(p, m_min, m_max):
        if s == 0 or subgraph.is_empty:
            logger.info(f"{p} m={m}: no code")
            continue
        rate = Fraction(s, m)
        logger.info(f"{p} m={m}: s={s} rate {float(rate):.3f}")
        if best is None or rate > best[0]:
            best = (rate, m, s, subgraph)
    if best is None:
        raise NoCodeError(f"no block length in {m_min}..{m_max} gives a code for {p}")
    _, m, s, subgraph = best
    return BlockSearch(m, s, build_codebook(subgraph, s))


def _vertex_bytes(m: int) -> int:
    return (m + 7) // 8


def save_codebook(cb: GraphCodebook, path: Union[str, Path]):
    width = _vertex_bytes(cb.m)
    packed = cb.vertices.astype(">u8").view(np.uint8).reshape(-1, 8)[:, 8 - width:]
    row_bytes = [row.astype(">u4").tobytes() for row in cb.rows]
    with open(path, "wb") as f:
        f.write(CODEBOOK_HEADER.pack(
            CODEBOOK_MAGIC, cb.params.ell, cb.params.delta, cb.m, cb.s, cb.vertices.shape[0]
        ))
        f.write(packed.tobytes())
        for r in cb.row_of:
            f.write(row_bytes[r])
    logger.info(f"Saved codebook {cb.params} m={cb.m} s={cb.s} to {path}")


def load_codebook(path: Union[str, Path]) -> GraphCodebook:
    data = Path(path).read_bytes()
    if len(data) < CODEBOOK_HEADER.size:
        raise HeaderError(f"{path} is too short for a codebook header")
    magic, ell, delta, m, s, count = CODEBOOK_HEADER.unpack_from(data)
    if magic != CODEBOOK_MAGIC:
        raise HeaderError(f"{path} does not start with {CODEBOOK_MAGIC!r}")
    params = ConstraintParams(ell, delta)
    width = _vertex_bytes(m)
    size = 1 << s
    offset = CODEBOOK_HEADER.size
    expected = offset + count * width + count * size * 4
    if len(data) != expected:
        raise CorruptionError(f"{path} holds {len(data)} bytes, expected {expected}")

    padded = np.zeros((count, 8), dtype=np.uint8)
    padded[:, 8 - width:] = np.frombuffer(data, dtype=np.uint8, count=count * width, offset=offset).reshape(count, width)
    vertices = padded.view(">u8").reshape(-1).astype(np.int64)
    offset += count * width
    table = np.frombuffer(data, dtype=">u4", count=count * size, offset=offset).reshape(count, size).astype(np.int64)
    rows, row_of = np.unique(table, axis=0, return_inverse=True)

    cb = GraphCodebook(params=params, m=m, s=s, vertices=vertices, rows=rows, row_of=row_of.reshape(-1))
    problems = cb.check_closure()
    if problems:
        raise CorruptionError(f"{path}: {'; '.join(problems)}")
    logger.info(f"Loaded codebook {params} m={m} s={s} from {path}")
    return cb


class GraphScheme(BlockScheme):
    scheme_id = 3
    name = "graph"

    def __init__(self, codebook: GraphCodebook):
        self.codebook = codebook

    @property
    def message_block(self) -> int:
        return self.codebook.s

    @property
    def code_block(self) -> int:
        return self.codebook.m

    def encoder(self) -> StreamEncoder:
        return GraphEncoder(self.codebook)

    def decode(self, code: Word) -> Word:
        return decode_graph(code, self.codebook)
