import math

import numpy as np
import pytest
import scipy.integrate
import scipy.linalg
import sympy

from amm.graphs import Graph, complete_graph, cycle_graph, path_graph, petersen_graph
from amm.spectral import (
    avg_mixing_numeric,
    convergence_constant,
    decompose,
    float_rank,
    mixing_snapshot,
    psi_kron_matrix,
    time_averaged_mixing,
    transition_matrix,
)


def sympy_amm(g: Graph) -> sympy.Matrix:
    """Exact sum of Schur-squared idempotents from symbolic eigenvectors."""
    A = sympy.Matrix(g.to_numpy().tolist())
    total = sympy.zeros(g.n, g.n)
    for _, _, vecs in A.eigenvects():
        Q = sympy.Matrix.hstack(*sympy.GramSchmidt(vecs, orthonormal=True))
        E = Q * Q.T
        total += E.multiply_elementwise(E)
    return total.applyfunc(sympy.nsimplify)


def F(p, q=1):
    return p / q


class TestDecompose:
    def test_triangle(self):
        sd = decompose(complete_graph(3).to_numpy())
        assert np.allclose(sd.thetas, [2, -1])
        assert sd.mults == (1, 2)
        J = np.ones((3, 3))
        assert np.allclose(sd.idempotents[0], J / 3)
        assert np.allclose(sd.idempotents[1], np.eye(3) - J / 3)

    def test_k2(self):
        A = complete_graph(2).to_numpy()
        sd = decompose(A)
        assert np.allclose(sd.thetas, [1, -1])
        assert np.allclose(sd.idempotents[0], (np.eye(2) + A) / 2)
        assert np.allclose(sd.idempotents[1], (np.eye(2) - A) / 2)

    def test_path(self):
        sd = decompose(path_graph(3).to_numpy())
        # characteristic polynomial x^3 - 2x
        assert np.allclose(sd.thetas, [math.sqrt(2), 0, -math.sqrt(2)])
        assert sd.mults == (1, 1, 1)

    @pytest.mark.parametrize("g", [complete_graph(5), cycle_graph(6), petersen_graph(), path_graph(7), Graph(4)])
    def test_invariants(self, g):
        A = g.to_numpy()
        sd = decompose(A)
        assert sd.check(A)
        assert sum(sd.mults) == g.n
        assert all(abs(np.trace(E) - m) < 1e-9 for E, m in zip(sd.idempotents, sd.mults))
        assert list(sd.thetas) == sorted(sd.thetas, reverse=True)
        assert not sd.ambiguous

    def test_ambiguous_gap_flag(self):
        A = np.diag([1.0, 1.0 + 5e-8, 3.0])
        sd = decompose(A, gap_tol=1e-8)
        assert sd.ambiguous and sd.d == 3
        assert decompose(A, gap_tol=1e-7).d == 2

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ValueError):
            decompose(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_corpus_invariants(self, small_corpus):
        for g in small_corpus:
            A = g.to_numpy()
            sd = decompose(A)
            assert sd.check(A), g
            assert sum(sd.mults) == g.n


class TestTransition:
    def test_identity_at_zero(self):
        sd = decompose(petersen_graph().to_numpy())
        assert np.allclose(transition_matrix(sd, 0.0), np.eye(10))

    def test_k2_quarter_period(self):
        A = complete_graph(2).to_numpy()
        assert np.allclose(transition_matrix(decompose(A), math.pi / 2), 1j * A)

    @pytest.mark.parametrize("g", [path_graph(4), cycle_graph(5), petersen_graph()])
    @pytest.mark.parametrize("t", [0.3, 1.7, 12.5])
    def test_matches_expm_and_unitary(self, g, t):
        A = g.to_numpy().astype(float)
        sd = decompose(A)
        U = transition_matrix(sd, t)
        assert np.allclose(U, scipy.linalg.expm(1j * t * A), atol=1e-10)
        assert np.allclose(U @ transition_matrix(sd, -t), np.eye(g.n), atol=1e-10)
        assert np.allclose(U, U.T, atol=1e-12)


class TestMixing:
    def test_zero(self):
        assert np.allclose(mixing_snapshot(decompose(path_graph(4).to_numpy()), 0).matrix, np.eye(4))

    def test_k2(self):
        sd = decompose(complete_graph(2).to_numpy())
        assert np.allclose(mixing_snapshot(sd, math.pi / 4).matrix, np.full((2, 2), 0.5))
        assert np.allclose(mixing_snapshot(sd, math.pi / 2).matrix, [[0, 1], [1, 0]])

    def test_doubly_stochastic_at_random_times(self, small_corpus):
        rng = np.random.default_rng(7)
        for g in small_corpus:
            sd = decompose(g.to_numpy())
            for t in rng.uniform(0, 50, size=100):
                M = mixing_snapshot(sd, t).matrix
                assert M.min() >= -1e-12 and M.max() <= 1 + 1e-12
                assert np.allclose(M.sum(axis=0), 1) and np.allclose(M.sum(axis=1), 1)
                assert np.allclose(M, M.T)


class TestAverageNumeric:
    @pytest.mark.parametrize("n", range(1, 9))
    def test_complete_closed_form(self, n):
        got = avg_mixing_numeric(decompose(complete_graph(n).to_numpy()))
        assert np.allclose(got, (1 - 2 / n) * np.eye(n) + (2 / n**2) * np.ones((n, n)))

    def test_path(self):
        got = avg_mixing_numeric(decompose(path_graph(3).to_numpy()))
        want = [[F(3, 8), F(1, 4), F(3, 8)], [F(1, 4), F(1, 2), F(1, 4)], [F(3, 8), F(1, 4), F(3, 8)]]
        assert np.allclose(got, want)

    def test_c4(self):
        got = avg_mixing_numeric(decompose(cycle_graph(4).to_numpy()))
        for i in range(4):
            assert got[i, i] == pytest.approx(3 / 8)
            assert got[i, (i + 1) % 4] == pytest.approx(1 / 8)
            assert got[i, (i + 2) % 4] == pytest.approx(3 / 8)
        assert float_rank(got) == 2

    @pytest.mark.parametrize("g", [path_graph(3), path_graph(4), cycle_graph(4), cycle_graph(5), Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])])
    def test_against_symbolic_idempotents(self, g):
        exact = np.array(sympy_amm(g).evalf(30).tolist(), dtype=float)
        assert np.abs(avg_mixing_numeric(decompose(g.to_numpy())) - exact).max() < 1e-12

    def test_properties(self, small_corpus):
        for g in small_corpus:
            M = avg_mixing_numeric(decompose(g.to_numpy()))
            assert np.allclose(M, M.T)
            assert np.allclose(M.sum(axis=1), 1)
            assert np.linalg.eigvalsh(M).min() > -1e-10


class TestTimeAverage:
    def test_single_eigenvalue(self):
        sd = decompose(np.zeros((1, 1)))
        assert time_averaged_mixing(sd, 3.0).tolist() == [[1.0]]

    def test_k2_against_quadrature(self):
        sd = decompose(complete_graph(2).to_numpy())
        T = 100.0
        got = time_averaged_mixing(sd, T)
        # |U_00(t)|^2 = cos^2 t
        quad = scipy.integrate.quad(lambda t: math.cos(t) ** 2, 0, T, limit=500)[0] / T
        assert got[0, 0] == pytest.approx(quad, abs=1e-10)
        assert np.abs(got - 0.5).max() <= 0.01

    @pytest.mark.parametrize("g", [path_graph(3), cycle_graph(5), Graph.from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3)])])
    def test_against_quadrature(self, g):
        sd = decompose(g.to_numpy())
        T = 10.0
        got = time_averaged_mixing(sd, T)
        for a, b in [(0, 0), (0, 1), (1, 2)]:
            f = lambda t: mixing_snapshot(sd, t).matrix[a, b]
            want = scipy.integrate.quad(f, 0, T, limit=500, epsabs=1e-12)[0] / T
            assert got[a, b] == pytest.approx(want, abs=1e-9)
        assert np.allclose(got.sum(axis=1), 1) and np.allclose(got, got.T)

    def test_convergence_on_path(self):
        sd = decompose(path_graph(3).to_numpy())
        limit = avg_mixing_numeric(sd)
        C = convergence_constant(sd)
        devs = [np.abs(time_averaged_mixing(sd, T) - limit).max() for T in (1e2, 1e3, 1e4)]
        assert devs[0] > devs[1] > devs[2]
        assert all(d <= C / T for d, T in zip(devs, (1e2, 1e3, 1e4)))

    def test_bound_holds_on_corpus(self, small_corpus):
        for g in small_corpus:
            sd = decompose(g.to_numpy())
            limit = avg_mixing_numeric(sd)
            C = convergence_constant(sd)
            for T in (1.0, 37.0, 1e3):
                assert np.abs(time_averaged_mixing(sd, T) - limit).max() <= C / T + 1e-12

    def test_rejects_nonpositive_horizon(self):
        with pytest.raises(ValueError):
            time_averaged_mixing(decompose(np.zeros((2, 2))), 0)


def test_kron_representation_trace(small_corpus):
    for g in small_corpus:
        sd = decompose(g.to_numpy())
        P = psi_kron_matrix(sd)
        assert np.allclose(P @ P, P)
        assert abs(np.trace(P) - sum(m * m for m in sd.mults)) < 1e-6
