import math

import numpy as np
import pytest

from src.capacity import (
    SpectralResult, build_debruijn_subgraph, capacity_lb, capacity_rds, capacity_table,
    rds_path_graph, spectral_radius,
)
from src.constraint_graph import ConstraintGraph
from src.enumeration import count_rds_words, growth_estimate
from src.errors import ConvergenceError, ParameterError
from src.words import ConstraintParams

CAPACITY_TABLE = {
    (4, 1): 0.879, (6, 1): 0.841, (8, 1): 0.824, (10, 1): 0.815, (12, 1): 0.811, (14, 1): 0.807,
    (4, 2): 1.0, (6, 2): 0.975, (8, 2): 0.958, (10, 2): 0.947, (12, 2): 0.939, (14, 2): 0.933,
}


@pytest.mark.parametrize("ell, delta, vertices", [(4, 2, 16), (4, 1, 14), (6, 1, 50)])
def test_debruijn_vertex_counts(ell, delta, vertices):
    assert len(build_debruijn_subgraph(ConstraintParams(ell, delta))) == vertices


def test_full_debruijn_graph():
    g = build_debruijn_subgraph(ConstraintParams(4, 2))
    assert (g.out_degrees() == 2).all()
    result = spectral_radius(g)
    assert result.eigenvalue == pytest.approx(2.0)
    assert result.capacity == pytest.approx(1.0)
    assert result.converged


def test_debruijn_edges_are_overlaps():
    g = build_debruijn_subgraph(ConstraintParams(4, 1))
    for i in range(len(g)):
        for j in g.out_neighbors(i):
            assert (int(g.vertices[i]) & 0b111) == (int(g.vertices[j]) >> 1)


def test_single_self_loop():
    result = spectral_radius(ConstraintGraph.from_adjacency(np.array([[1]])))
    assert result.eigenvalue == pytest.approx(1.0)
    assert result.capacity == pytest.approx(0.0, abs=1e-12)


def test_empty_graph_rejected():
    with pytest.raises(ParameterError):
        spectral_radius(ConstraintGraph.from_adjacency(np.zeros((0, 0))))


def test_non_convergence_reports_partial_result():
    rng = np.random.default_rng(0)
    adjacency = (rng.random((40, 40)) < 0.3).astype(np.int8)
    with pytest.raises(ConvergenceError) as info:
        spectral_radius(ConstraintGraph.from_adjacency(adjacency), tol=1e-15, max_iter=2)
    assert isinstance(info.value.result, SpectralResult)
    assert not info.value.result.converged


@pytest.mark.parametrize("ell, delta", [(4, 1), (6, 1), (8, 1)])
def test_repeated_max_entry_does_not_stop_iteration(ell, delta):
    # vertices of full out-degree keep max(Ax + x) at 3 for the first iterations
    g = build_debruijn_subgraph(ConstraintParams(ell, delta))
    result = spectral_radius(g)
    assert result.iterations > 2
    assert result.eigenvalue < 2.0
    dense = g.link.toarray()[np.ix_(g.tails, g.heads)].astype(float)
    assert result.eigenvalue == pytest.approx(max(abs(np.linalg.eigvals(dense))), abs=1e-6)


def test_six_one_eigenvalue():
    result = spectral_radius(build_debruijn_subgraph(ConstraintParams(6, 1)))
    assert result.eigenvalue == pytest.approx(1.7910814545545568, abs=1e-6)
    assert round(result.capacity, 3) == 0.841


def test_spectral_radius_matches_dense_eigenvalues():
    g = build_debruijn_subgraph(ConstraintParams(6, 1))
    dense = g.link.toarray()[np.ix_(g.tails, g.heads)].astype(float)
    expected = max(abs(np.linalg.eigvals(dense)))
    assert spectral_radius(g).eigenvalue == pytest.approx(expected, abs=1e-6)


@pytest.mark.parametrize("ell, delta", [(4, 1), (6, 1), (4, 2), (8, 2)])
def test_capacity_table_small(ell, delta):
    assert capacity_lb(ConstraintParams(ell, delta)) == pytest.approx(CAPACITY_TABLE[ell, delta], abs=5e-4)


@pytest.mark.slow
def test_capacity_table_full():
    rows = capacity_table(range(4, 15, 2), [1, 2])
    assert len(rows) == 12
    for row in rows:
        assert round(row.capacity, 3) == pytest.approx(CAPACITY_TABLE[row.ell, row.delta], abs=5e-4)


def test_capacity_table_monotone():
    values = {(ell, d): capacity_lb(ConstraintParams(ell, d)) for ell in (4, 6, 8, 10) for d in (1, 2)}
    for d in (1, 2):
        assert values[4, d] >= values[6, d] >= values[8, d] >= values[10, d]
    for ell in (4, 6, 8, 10):
        assert values[ell, 2] > values[ell, 1]


def test_capacity_rds_values():
    assert capacity_rds(3) == pytest.approx(0.694, abs=1e-3)
    assert capacity_rds(1) == pytest.approx(0.0, abs=1e-12)
    assert capacity_rds(2) == pytest.approx(0.5)
    with pytest.raises(ParameterError):
        capacity_rds(0)


@pytest.mark.parametrize("delta", [1, 2, 3, 4, 7])
def test_capacity_rds_matches_path_graph(delta):
    result = spectral_radius(rds_path_graph(delta), tol=1e-12)
    assert result.capacity == pytest.approx(capacity_rds(delta), abs=1e-9)


def test_capacity_rds_matches_word_counts():
    counts = [count_rds_words(3, n) for n in (300, 301)]
    assert math.log2(counts[1] / counts[0]) == pytest.approx(capacity_rds(3), abs=1e-6)


def test_growth_matches_capacity():
    ratio = growth_estimate(ConstraintParams(6, 1), 40)
    assert 1.790 <= ratio <= 1.792
    assert abs(math.log2(ratio) - capacity_lb(ConstraintParams(6, 1))) < 1e-3
