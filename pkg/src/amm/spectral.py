"""Floating-point spectral side of the walk.

``decompose`` groups the eigenvalues of a symmetric matrix into distinct
values with their spectral idempotents.  Everything else (``U(t)``, ``M(t)``,
the average mixing matrix and its finite-horizon approximation) is built from
those idempotents.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "TOL_SPEC",
    "SpectralDecomposition",
    "MixingSnapshot",
    "decompose",
    "transition_matrix",
    "mixing_snapshot",
    "avg_mixing_numeric",
    "time_averaged_mixing",
    "convergence_constant",
    "psi_kron_matrix",
    "float_rank",
]

TOL_SPEC = 1e-9


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    thetas: np.ndarray          # distinct eigenvalues, descending
    mults: tuple[int, ...]
    idempotents: tuple[np.ndarray, ...]
    ambiguous: bool = False     # some eigenvalue gap fell just above gap_tol
    bases: tuple[np.ndarray, ...] = field(default=(), repr=False)

    @property
    def n(self) -> int:
        return self.idempotents[0].shape[0]

    @property
    def d(self) -> int:
        return len(self.thetas)

    def residuals(self, A: np.ndarray | None = None) -> dict[str, float]:
        """Max-entry residuals of completeness, orthogonality, idempotence and reconstruction."""
        E = self.idempotents
        n = self.n
        res = {
            "completeness": float(np.abs(sum(E) - np.eye(n)).max()),
            "idempotence": max(float(np.abs(e @ e - e).max()) for e in E),
            "orthogonality": max(
                (float(np.abs(E[r] @ E[s]).max()) for r in range(self.d) for s in range(self.d) if r != s),
                default=0.0,
            ),
        }
        if A is not None:
            recon = sum(t * e for t, e in zip(self.thetas, E))
            res["reconstruction"] = float(np.abs(recon - np.asarray(A, dtype=float)).max())
        return res

    def check(self, A: np.ndarray | None = None, tol: float = TOL_SPEC) -> bool:
        return all(v <= tol for v in self.residuals(A).values())


@dataclass(frozen=True, eq=False)
class MixingSnapshot:
    t: float
    matrix: np.ndarray


def decompose(A, gap_tol: float | None = None) -> SpectralDecomposition:
    """Spectral decomposition with eigenvalues clustered at ``gap_tol``.

    Neighbouring sorted eigenvalues join one cluster iff their gap is at most
    ``gap_tol`` (default ``1e-8 * max(1, ||A||_inf)``).  Gaps in
    ``(gap_tol, 10 * gap_tol)`` set ``ambiguous`` on the result.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    if not np.allclose(A, A.T, rtol=0, atol=1e-12):
        raise ValueError("A must be symmetric")
    if gap_tol is None:
        gap_tol = 1e-8 * max(1.0, float(np.abs(A).sum(axis=1).max(initial=0.0)))
    try:
        evals, evecs = np.linalg.eigh(A)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigensolver failed: {exc}") from exc
    order = np.argsort(-evals, kind="stable")
    evals, evecs = evals[order], evecs[:, order]

    clusters: list[list[int]] = [[0]]
    ambiguous = False
    for k in range(1, len(evals)):
        gap = evals[k - 1] - evals[k]
        if gap <= gap_tol:
            clusters[-1].append(k)
        else:
            if gap < 10 * gap_tol:
                ambiguous = True
            clusters.append([k])

    thetas, mults, idems, bases = [], [], [], []
    for c in clusters:
        V = evecs[:, c]
        thetas.append(float(evals[c].mean()))
        mults.append(len(c))
        idems.append(V @ V.T)
        bases.append(V)
    return SpectralDecomposition(
        thetas=np.array(thetas),
        mults=tuple(mults),
        idempotents=tuple(idems),
        ambiguous=ambiguous,
        bases=tuple(bases),
    )


def transition_matrix(sd: SpectralDecomposition, t: float) -> np.ndarray:
    """``U(t) = sum_r exp(i t theta_r) E_r``."""
    return sum(np.exp(1j * t * th) * E for th, E in zip(sd.thetas, sd.idempotents))


def mixing_snapshot(sd: SpectralDecomposition, t: float) -> MixingSnapshot:
    U = transition_matrix(sd, t)
    return MixingSnapshot(t=t, matrix=(U * U.conj()).real)


def avg_mixing_numeric(sd: SpectralDecomposition) -> np.ndarray:
    """Sum of the Schur squares of the spectral idempotents."""
    return sum(E * E for E in sd.idempotents)


def _sinc_average(delta: float, T: float) -> float:
    # real part of (1/T) int_0^T exp(i t delta) dt; imaginary parts cancel between (r,s) and (s,r)
    x = delta * T
    return float(np.sin(x) / x)


def time_averaged_mixing(sd: SpectralDecomposition, T: float) -> np.ndarray:
    """Closed-form ``(1/T) int_0^T M(t) dt``."""
    if T <= 0:
        raise ValueError("T must be positive")
    out = avg_mixing_numeric(sd).copy()
    E = sd.idempotents
    for r in range(sd.d):
        for s in range(r + 1, sd.d):
            w = _sinc_average(sd.thetas[r] - sd.thetas[s], T)
            out += 2 * w * (E[r] * E[s])
    return out


def convergence_constant(sd: SpectralDecomposition) -> float:
    """``C`` with ``max|Mbar(T) - Mhat| <= C / T``: sum over r != s of 2 max|E_r o E_s| / |theta_r - theta_s|."""
    E = sd.idempotents
    C = 0.0
    for r in range(sd.d):
        for s in range(sd.d):
            if r != s:
                C += 2 * float(np.abs(E[r] * E[s]).max()) / abs(sd.thetas[r] - sd.thetas[s])
    return C


def psi_kron_matrix(sd: SpectralDecomposition) -> np.ndarray:
    """Matrix of the commutant projection on column-stacked vectors: ``sum_r E_r kron E_r``."""
    return sum(np.kron(E, E) for E in sd.idempotents)


def float_rank(M: np.ndarray, threshold: float = 1e-7) -> int:
    """Number of singular values above ``threshold``."""
    return int((np.linalg.svd(np.asarray(M, dtype=float), compute_uv=False) > threshold).sum())
