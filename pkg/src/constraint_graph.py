"""
Directed graphs over fixed-length binary words, stored without an explicit
edge list.

Every vertex carries a tail class (what it exposes to its successors) and a
head class (what it exposes to its predecessors). An edge u -> v exists iff
``link[tail(u), head(v)]`` is set. For block graphs the classes are the last
and first ell-1 bits; for de Bruijn graphs they are the ell-1 bit overlap and
the link is the identity. Arbitrary graphs use one class per vertex and the
adjacency matrix as the link.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sps

from .errors import ParameterError
from .words import ConstraintParams, Word


@dataclass(frozen=True, eq=False)
class ConstraintGraph:
    m: int
    params: Optional[ConstraintParams]
    vertices: np.ndarray
    tails: np.ndarray
    heads: np.ndarray
    link: sps.csr_matrix

    def __post_init__(self):
        n = self.vertices.shape[0]
        if self.tails.shape[0] != n or self.heads.shape[0] != n:
            raise ParameterError("every vertex needs exactly one tail and one head class")
        for name in ("vertices", "tails", "heads"):
            arr = np.array(getattr(self, name), dtype=np.int64)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "link", sps.csr_matrix(self.link, dtype=np.int8))

    @classmethod
    def from_adjacency(cls, matrix) -> "ConstraintGraph":
        adjacency = sps.csr_matrix(matrix, dtype=np.int8)
        if adjacency.shape[0] != adjacency.shape[1]:
            raise ParameterError(f"adjacency must be square, got {adjacency.shape}")
        ids = np.arange(adjacency.shape[0], dtype=np.int64)
        return cls(m=0, params=None, vertices=ids, tails=ids, heads=ids, link=adjacency)

    def __len__(self) -> int:
        return self.vertices.shape[0]

    def word(self, i: int) -> Word:
        return Word.from_int(int(self.vertices[i]), self.m)

    def index_of(self, code: int) -> Optional[int]:
        i = int(np.searchsorted(self.vertices, code))
        if i < len(self) and self.vertices[i] == code:
            return i
        return None

    def _head_totals(self, weights: Optional[np.ndarray], alive: Optional[np.ndarray]):
        heads = self.heads
        if alive is not None:
            heads = heads[alive]
            if weights is not None:
                weights = weights[alive]
        return np.bincount(heads, weights=weights, minlength=self.link.shape[1])

    def out_degrees(self, alive: Optional[np.ndarray] = None) -> np.ndarray:
        """Out-degree of every vertex, counting only successors inside ``alive``"""
        counts = self._head_totals(None, alive).astype(np.int64)
        return np.asarray(self.link @ counts).ravel()[self.tails]

    def out_neighbors(self, i: int, alive: Optional[np.ndarray] = None) -> np.ndarray:
        """Sorted indices of the successors of vertex i"""
        row = self.link.getrow(int(self.tails[i])).toarray().ravel()
        mask = row[self.heads] != 0
        if alive is not None:
            mask &= alive
        return np.flatnonzero(mask)

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.link[int(self.tails[i]), int(self.heads[j])])

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Adjacency operator: (A x)[u] = sum of x over the successors of u"""
        totals = self._head_totals(np.asarray(x, dtype=float), None)
        return np.asarray(self.link @ totals).ravel()[self.tails]

    def edge_count(self) -> int:
        return int(self.out_degrees().sum())
