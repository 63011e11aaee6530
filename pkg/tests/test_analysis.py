from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from networkx.algorithms.isomorphism import GraphMatcher

from amm.analysis import (
    UnsupportedGraphError,
    amm_summary,
    automorphisms,
    check_graph,
    check_rank_bounds,
    fixed_point_bound,
    fixed_point_corollary_check,
    rank_report,
    unique_fixed_point_vertices,
)
from amm.commutant import average_mixing_exact, commutant_basis, zero_diagonal_subalgebra
from amm.graphs import Graph, adjacency_matrix, classify, complete_graph, cycle_graph, parse_graph6, path_graph, petersen_graph

F = Fraction


def to_nx(g: Graph) -> nx.Graph:
    G = nx.empty_graph(g.n)
    G.add_edges_from(g.edges())
    return G


def nx_automorphisms(g: Graph) -> set[tuple[int, ...]]:
    G = to_nx(g)
    return {tuple(m[v] for v in range(g.n)) for m in GraphMatcher(G, G).isomorphisms_iter()}


def amm_of(g):
    return average_mixing_exact(commutant_basis(adjacency_matrix(g)))


class TestAutomorphisms:
    @pytest.mark.parametrize("g, order", [(complete_graph(3), 6), (path_graph(3), 2), (cycle_graph(5), 10), (petersen_graph(), 120)])
    def test_orders(self, g, order):
        aut = automorphisms(g)
        assert aut.order == order and aut.is_group()

    def test_against_networkx(self, small_corpus):
        for g in small_corpus:
            assert set(automorphisms(g).perms) == nx_automorphisms(g), g

    def test_size_limit(self):
        with pytest.raises(UnsupportedGraphError):
            automorphisms(path_graph(13))

    def test_unique_fixed_points_targeted_matches_full(self, small_corpus):
        for g in small_corpus:
            assert unique_fixed_point_vertices(g) == unique_fixed_point_vertices(g, automorphisms(g)), g


class TestFixedPointBound:
    @pytest.mark.parametrize("g, bound", [(cycle_graph(5), 5), (path_graph(3), 2), (complete_graph(2), 1), (complete_graph(4), 4)])
    def test_examples(self, g, bound):
        assert fixed_point_bound(g) == bound

    def test_holds_on_corpus(self, small_corpus):
        for g in small_corpus:
            fixed_point_bound(g, rank=amm_of(g).rank)

    def test_raises_when_violated(self):
        with pytest.raises(AssertionError):
            fixed_point_bound(cycle_graph(5), rank=3)


class TestRankBounds:
    def test_simple_path(self):
        rep = check_rank_bounds(path_graph(3), 2, True)
        assert rep.ok and {b.value for b in rep.bounds} == {2}

    def test_flags_violation(self):
        rep = check_rank_bounds(path_graph(4), 4, True)
        assert not rep.ok
        assert {b.name for b in rep.violations()} >= {"simple spectrum: rank <= n-1"}

    def test_no_bounds_without_simple_spectrum(self):
        assert check_rank_bounds(complete_graph(4), 4, False).bounds == []

    def test_regular(self):
        rep = check_rank_bounds(cycle_graph(5), 5, True, fixed_point=1)
        assert {b.value for b in rep.violations()} == {4, 2}

    def test_corpus(self, small_corpus):
        for g in small_corpus:
            rep = rank_report(g)
            assert rep.ok, (g, rep.violations())

    def test_report_json(self):
        js = rank_report(path_graph(3)).to_json()
        assert js["rank"] == 2 and js["trace"] == "5/4" and js["simple_spectrum"]
        assert set(js) == {"n", "rank", "simple_spectrum", "bounds", "trace", "amm_spectrum"}


class TestCorollary:
    def test_vacuous_on_triangle(self):
        assert not fixed_point_corollary_check(complete_graph(3)).applies

    def test_path_contrapositive(self):
        # the reversal of P4 fixes no vertex, so the rank stays below n - 1
        assert not fixed_point_corollary_check(path_graph(4)).applies
        assert amm_of(path_graph(4)).rank == 2

    @pytest.mark.parametrize("record", [b"BW", b"CN", b"DJc"])
    def test_applies(self, record):
        rep = fixed_point_corollary_check(parse_graph6(record))
        assert rep.applies and rep.ok and rep.fixed_point_free == []

    def test_corpus(self, small_corpus):
        for g in small_corpus:
            assert fixed_point_corollary_check(g).ok, g


class TestSummary:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_complete_trace(self, n):
        trace, spec = amm_summary(amm_of(complete_graph(n)))
        assert trace == n - 2 + F(2, n)
        if n == 2:
            assert np.allclose(spec, [1, 0])
        else:
            assert np.allclose(spec, [1] + [1 - 2 / n] * (n - 1))

    def test_path_trace(self):
        assert amm_summary(amm_of(path_graph(3)))[0] == F(5, 4)


@pytest.mark.parametrize("n", [3, 5, 7, 9, 11])
def test_odd_cycles_invertible(n):
    assert amm_of(cycle_graph(n)).rank == n


@pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
def test_even_cycle_ranks(n):
    # antipodal vertices have identical rows, so the rank halves
    M = amm_of(cycle_graph(n))
    assert M.rank == n // 2
    assert all(M.matrix.row(a) == M.matrix.row(a + n // 2) for a in range(n // 2))


def test_bipartite_simple_zero_diagonal_dimension(small_corpus):
    for g in small_corpus:
        cb = commutant_basis(adjacency_matrix(g))
        if cb.simple_spectrum and classify(g).bipartite:
            assert len(zero_diagonal_subalgebra(cb)) >= g.n // 2, g


@pytest.mark.parametrize("g", [complete_graph(3), path_graph(5), cycle_graph(6), Graph.from_edges(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])])
def test_check_graph_passes(g):
    results = check_graph(g, samples=10)
    assert len(results) >= 10
    assert all(r.passed for r in results), [r for r in results if not r.passed]
