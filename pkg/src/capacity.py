"""
Capacities of the locally balanced and the bounded-RDS constraints.

C(ell, delta) is log2 of the spectral radius of the de Bruijn subgraph on the
balanced ell-bit words. C_RDS(delta) has the closed form log2(2 cos(pi/(delta+2))),
the spectral radius of the path on delta+1 RDS levels.
"""
import logging
import math
from dataclasses import dataclass
from typing import Iterable, List, NamedTuple

import numpy as np
import scipy.sparse as sps

from .constraint_graph import ConstraintGraph
from .errors import ConvergenceError, ParameterError
from .words import ConstraintParams, popcount

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True)
class SpectralResult:
    eigenvalue: float
    iterations: int
    residual: float
    converged: bool = True

    @property
    def capacity(self) -> float:
        if self.eigenvalue <= 0:
            return float("-inf")
        return math.log2(self.eigenvalue)


def build_debruijn_subgraph(p: ConstraintParams) -> ConstraintGraph:
    codes = np.arange(1 << p.ell, dtype=np.int64)
    weights = popcount(codes)
    vertices = codes[(weights >= p.low) & (weights <= p.high)]
    overlap = p.ell - 1
    graph = ConstraintGraph(
        m=p.ell,
        params=p,
        vertices=vertices,
        tails=vertices & ((1 << overlap) - 1),
        heads=vertices >> 1,
        link=sps.identity(1 << overlap, dtype=np.int8, format="csr"),
    )
    logger.debug(f"de Bruijn subgraph {p}: {len(graph)} vertices")
    return graph


def rds_path_graph(delta: int) -> ConstraintGraph:
    """Adjacency of the delta+1 RDS levels, neighbouring levels connected"""
    if delta < 1:
        raise ParameterError(f"delta must be >= 1, got {delta}")
    ones = np.ones(delta)
    return ConstraintGraph.from_adjacency(sps.diags([ones, ones], [-1, 1], shape=(delta + 1, delta + 1)))


def spectral_radius(g: ConstraintGraph, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> SpectralResult:
    """Dominant eigenvalue by power iteration with max-norm rescaling.

    Iterates with A + I so that bipartite graphs do not oscillate; the shift
    is removed from the reported eigenvalue. Iteration stops once the
    normalized vector moves by less than tol in max-norm; the max entry alone
    can repeat long before that. The residual is the gap between the
    Collatz-Wielandt bounds min(Ax/x) and max(Ax/x) of the last iterate.

    Raises:
        ParameterError: for an empty graph
        ConvergenceError: after max_iter iterations, carrying the last estimate
    """
    if len(g) == 0:
        raise ParameterError("spectral radius of an empty graph")
    if max_iter < 1 or tol <= 0:
        raise ParameterError(f"need max_iter >= 1 and tol > 0, got {max_iter} and {tol}")
    x = np.ones(len(g))
    estimate = 0.0
    residual = float("inf")
    for iteration in range(1, max_iter + 1):
        y = g.apply(x) + x
        estimate = float(y.max())
        ratios = y / x
        residual = float(ratios.max() - ratios.min())
        nxt = y / estimate
        change = float(np.abs(nxt - x).max())
        x = nxt
        if change < tol:
            logger.debug(f"power iteration converged after {iteration} steps, residual {residual:.2e}")
            return SpectralResult(estimate - 1.0, iteration, residual)

    result = SpectralResult(estimate - 1.0, max_iter, residual, converged=False)
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps", result)


def capacity_lb(p: ConstraintParams, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> float:
    result = spectral_radius(build_debruijn_subgraph(p), tol, max_iter)
    logger.info(f"C{p} = {result.capacity:.6f} (lambda {result.eigenvalue:.9f}, {result.iterations} iterations)")
    return result.capacity


def capacity_rds(delta: int) -> float:
    if delta < 1:
        raise ParameterError(f"delta must be >= 1, got {delta}")
    return math.log2(2 * math.cos(math.pi / (delta + 2)))


class CapacityRow(NamedTuple):
    ell: int
    delta: int
    capacity: float


def capacity_table(ells: Iterable[int], deltas: Iterable[int], tol: float = DEFAULT_TOL,
                   max_iter: int = DEFAULT_MAX_ITER) -> List[CapacityRow]:
    deltas = list(deltas)
    rows = []
    for ell in ells:
        for delta in deltas:
            rows.append(CapacityRow(ell, delta, capacity_lb(ConstraintParams(ell, delta), tol, max_iter)))
    return rows
