"""Exact commutant of an adjacency matrix and the projection onto it.

The commutant ``cmm(A)`` is a rational subspace even when the eigenvalues of
``A`` are irrational, so it is computed as the exact nullspace of
``M -> AM - MA`` (on column-stacked vectors, ``I kron A - A kron I``).  The
orthogonal projection onto it under the trace inner product is realised with
the normal equations of that basis.  No spectral idempotents are used here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .rational import RationalMatrix, dot, inverse, is_psd, nullspace, rank

__all__ = [
    "CommutantBasis",
    "AverageState",
    "AverageMixingMatrix",
    "DecompositionReport",
    "commutant_basis",
    "commutator_operator",
    "project_commutant",
    "average_state",
    "average_states",
    "average_mixing_exact",
    "gram_of_average_states",
    "zero_diagonal_subalgebra",
    "decomposition_check",
    "kernel_diag_check",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def commutator_operator(A: RationalMatrix) -> list[list[Fraction]]:
    """Rows of ``I kron A - A^T kron I``, the matrix of ``M -> AM - MA`` on vec(M)."""
    n = A.rows
    rows = []
    for j in range(n):
        for i in range(n):
            # (AM - MA)[i, j] = sum_k A[i,k] M[k,j] - M[i,k] A[k,j]
            r = [_ZERO] * (n * n)
            for k in range(n):
                a = A[i, k]
                if a:
                    r[j * n + k] += a
                b = A[k, j]
                if b:
                    r[k * n + i] -= b
            rows.append(r)
    return rows


@dataclass(frozen=True, eq=False)
class CommutantBasis:
    """Rational basis of ``cmm(A)``; each element is stored as its column-stacked vector."""

    A: RationalMatrix
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def n(self) -> int:
        return self.A.rows

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def simple_spectrum(self) -> bool:
        # all eigenvalues simple <=> sum of squared multiplicities equals n
        return self.dim == self.n

    def matrices(self) -> list[RationalMatrix]:
        return [RationalMatrix.from_vec(b, self.n) for b in self.basis]

    @cached_property
    def _sparse(self) -> list[list[tuple[int, Fraction]]]:
        return [[(k, x) for k, x in enumerate(b) if x] for b in self.basis]

    @cached_property
    def gram_inverse(self) -> RationalMatrix:
        sp = self._sparse
        gram = [[_sparse_dot(sp[p], self.basis[q]) for q in range(self.dim)] for p in range(self.dim)]
        return inverse(RationalMatrix(gram))

    @cached_property
    def diagonal_rows(self) -> RationalMatrix:
        """``n x dim`` matrix whose (a, k) entry is the (a, a) entry of basis element k."""
        n = self.n
        return RationalMatrix([[b[a * n + a] for b in self.basis] for a in range(n)])

    def coordinates(self, v: Sequence[Fraction]) -> list[Fraction]:
        """Coefficients of the projection of ``v`` in the stored basis."""
        rhs = [_sparse_dot(s, v) for s in self._sparse]
        return self.gram_inverse.matvec(rhs)

    def combine(self, coeffs: Sequence[Fraction]) -> list[Fraction]:
        out = [_ZERO] * (self.n * self.n)
        for c, s in zip(coeffs, self._sparse):
            if c:
                for k, x in s:
                    out[k] += c * x
        return out


def _sparse_dot(sparse: list[tuple[int, Fraction]], v: Sequence[Fraction]) -> Fraction:
    total = _ZERO
    for k, x in sparse:
        y = v[k]
        if y:
            total += x * y
    return total


def _check_adjacency(A: RationalMatrix) -> None:
    if not A.is_square():
        raise ValueError("A must be square")
    if not A.is_symmetric():
        raise ValueError("A must be symmetric")


def commutant_basis(A: RationalMatrix) -> CommutantBasis:
    _check_adjacency(A)
    basis = nullspace(commutator_operator(A))
    return CommutantBasis(A=A, basis=tuple(tuple(b) for b in basis))


def project_commutant(cb: CommutantBasis, M: RationalMatrix) -> RationalMatrix:
    """Orthogonal projection of ``M`` onto ``cmm(A)`` under the trace inner product."""
    if M.shape != (cb.n, cb.n):
        raise ValueError(f"expected a {cb.n}x{cb.n} matrix, got {M.shape}")
    v = cb.combine(cb.coordinates(M.vec()))
    return RationalMatrix.from_vec(v, cb.n)


@dataclass(frozen=True, eq=False)
class AverageState:
    vertex: int
    matrix: RationalMatrix

    def violations(self, A: RationalMatrix) -> list[str]:
        out = []
        if not self.matrix.is_symmetric():
            out.append("not symmetric")
        elif not is_psd(self.matrix)[0]:
            out.append("not positive semidefinite")
        if self.matrix.trace() != 1:
            out.append(f"trace {self.matrix.trace()} != 1")
        if not self.matrix.commutes_with(A):
            out.append("does not commute with A")
        return out


def _check_vertex(cb: CommutantBasis, a: int) -> None:
    if not 0 <= a < cb.n:
        raise ValueError(f"vertex {a} outside 0..{cb.n - 1}")


def average_state(cb: CommutantBasis, a: int) -> AverageState:
    """Projection of the pure state ``e_a e_a^T`` onto the commutant."""
    _check_vertex(cb, a)
    n = cb.n
    # B^T vec(D_a) is just the (a, a) entries of the basis
    rhs = [b[a * n + a] for b in cb.basis]
    v = cb.combine(cb.gram_inverse.matvec(rhs))
    return AverageState(vertex=a, matrix=RationalMatrix.from_vec(v, n))


def average_states(cb: CommutantBasis) -> list[AverageState]:
    return [average_state(cb, a) for a in range(cb.n)]


@dataclass(frozen=True, eq=False)
class AverageMixingMatrix:
    matrix: RationalMatrix
    rank: int
    psd_pivots: tuple[Fraction, ...] = field(default=(), repr=False)

    @property
    def n(self) -> int:
        return self.matrix.rows

    def violations(self) -> list[str]:
        M = self.matrix
        out = []
        if not M.is_symmetric():
            out.append("not symmetric")
        for i in range(M.rows):
            if sum(M.row(i), _ZERO) != 1:
                out.append(f"row {i} does not sum to 1")
        for j, col in enumerate(zip(*M.tolist())):
            if sum(col, _ZERO) != 1:
                out.append(f"column {j} does not sum to 1")
        if any(x < 0 or x > 1 for r in M.tolist() for x in r):
            out.append("entry outside [0, 1]")
        if not is_psd(M)[0]:
            out.append("not positive semidefinite")
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "matrix": self.matrix.to_strings(), "rank": self.rank}


def average_mixing_exact(cb: CommutantBasis) -> AverageMixingMatrix:
    """Matrix of the diagonal-restricted projection: entry (a, b) is ``<D_a, Psi(D_b)>``."""
    Bd = cb.diagonal_rows
    M = Bd @ cb.gram_inverse @ Bd.T
    psd, pivots = is_psd(M)
    return AverageMixingMatrix(matrix=M, rank=rank(M), psd_pivots=tuple(pivots))


def gram_of_average_states(cb: CommutantBasis) -> RationalMatrix:
    """Trace-inner-product Gram matrix of the average states, computed from the states themselves."""
    states = [s.matrix for s in average_states(cb)]
    n = cb.n
    G = [[_ZERO] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            G[a][b] = G[b][a] = states[a].inner(states[b])
    return RationalMatrix(G)


def zero_diagonal_subalgebra(cb: CommutantBasis) -> list[RationalMatrix]:
    """Basis of the zero-diagonal part of the commutant.

    Solved as one system: the commutator equations plus ``M[a, a] = 0``.
    """
    n = cb.n
    rows = commutator_operator(cb.A)
    for a in range(n):
        r = [_ZERO] * (n * n)
        r[a * n + a] = _ONE
        rows.append(r)
    return [RationalMatrix.from_vec(v, n) for v in nullspace(rows)]


@dataclass
class DecompositionReport:
    graph: str
    dim_commutant: int
    dim_psi_diagonals: int
    dim_zero_diagonal: int
    rank_amm: int
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def decomposition_check(cb: CommutantBasis, label: str = "") -> DecompositionReport:
    """Check that the commutant splits as (average-state span) + (zero-diagonal part)."""
    states = [s.matrix for s in average_states(cb)]
    state_vecs = [s.vec() for s in states]
    a0 = zero_diagonal_subalgebra(cb)
    a0_vecs = [m.vec() for m in a0]
    amm = average_mixing_exact(cb)

    dim_psi = rank(state_vecs)
    dim_a0 = len(a0)
    rep = DecompositionReport(
        graph=label,
        dim_commutant=cb.dim,
        dim_psi_diagonals=dim_psi,
        dim_zero_diagonal=dim_a0,
        rank_amm=amm.rank,
    )
    if dim_psi + dim_a0 != cb.dim:
        rep.failures.append(f"dimensions {dim_psi} + {dim_a0} != {cb.dim}")
    if a0_vecs and rank(state_vecs + a0_vecs) != dim_psi + dim_a0:
        rep.failures.append("average-state span meets the zero-diagonal part nontrivially")
    for k, v in enumerate(a0_vecs):
        if any(dot(v, s) for s in state_vecs):
            rep.failures.append(f"zero-diagonal basis element {k} not orthogonal to the average states")
    if any(not cb.A.commutes_with(m) for m in a0):
        rep.failures.append("zero-diagonal basis element outside the commutant")
    if a0 and rank(a0_vecs + [cb.A.vec()]) != dim_a0:
        rep.failures.append("A is not in the span of the zero-diagonal part")
    if dim_psi != amm.rank:
        rep.failures.append(f"dim of average-state span {dim_psi} != rank of average mixing matrix {amm.rank}")
    diag_images = [[s[a, a] for a in range(cb.n)] for s in states]
    if rank(diag_images) != amm.rank:
        rep.failures.append("rank of the diagonal-restricted images differs from rank of average mixing matrix")
    if label:
        rep.failures = [f"{label}: {f}" for f in rep.failures]
    return rep


def kernel_diag_check(cb: CommutantBasis, D: RationalMatrix) -> bool:
    """Whether ``Psi(D) == 0`` for diagonal ``D``; asserts this matches ``diag(Psi(D)) == 0``."""
    if D.shape != (cb.n, cb.n):
        raise ValueError(f"expected a {cb.n}x{cb.n} matrix, got {D.shape}")
    if not D.is_diagonal():
        raise ValueError("D must be diagonal")
    P = project_commutant(cb, D)
    vanishes = P.is_zero()
    diag_vanishes = not any(P.diag())
    if vanishes != diag_vanishes:
        raise AssertionError(f"Psi(D) == 0 is {vanishes} but diag(Psi(D)) == 0 is {diag_vanishes}")
    return vanishes
