"""Rank bounds, automorphisms and whole-graph property checks for the average mixing matrix."""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator

import numpy as np

from . import commutant as cm
from . import spectral as sp
from .graphs import Graph, GraphClass, adjacency_matrix, classify
from .rational import RationalMatrix, format_rational, nullspace

__all__ = [
    "MAX_AUT_ORDER",
    "UnsupportedGraphError",
    "AutomorphismSet",
    "Bound",
    "RankReport",
    "CorollaryReport",
    "CheckResult",
    "automorphisms",
    "unique_fixed_point_vertices",
    "check_rank_bounds",
    "fixed_point_bound",
    "fixed_point_corollary_check",
    "amm_summary",
    "rank_report",
    "random_rational_matrix",
    "check_graph",
    "float_tolerance",
]

MAX_AUT_ORDER = 12


class UnsupportedGraphError(ValueError):
    pass


def float_tolerance() -> float:
    """Tolerance for float-vs-exact cross-checks; ``AMM_TOL`` overrides the default 1e-9."""
    return float(os.environ.get("AMM_TOL", "1e-9"))


# -- automorphisms --------------------------------------------------------------


@dataclass(frozen=True)
class AutomorphismSet:
    n: int
    perms: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.perms)

    def fixed_points(self, perm: tuple[int, ...]) -> list[int]:
        return [v for v in range(self.n) if perm[v] == v]

    def is_group(self) -> bool:
        ps = set(self.perms)
        ident = tuple(range(self.n))
        if ident not in ps:
            return False
        for p in self.perms:
            inv = [0] * self.n
            for v, w in enumerate(p):
                inv[w] = v
            if tuple(inv) not in ps:
                return False
            for q in self.perms:
                if tuple(p[q[v]] for v in range(self.n)) not in ps:
                    return False
        return True


def _vertex_invariants(g: Graph) -> list[tuple]:
    degs = g.degrees()
    return [(degs[v], tuple(sorted(degs[u] for u in g.neighbors(v)))) for v in range(g.n)]


def _search_order(g: Graph) -> list[int]:
    # breadth-first from a max-degree vertex so each new vertex has mapped neighbours
    order, seen = [], set()
    for s in sorted(range(g.n), key=lambda v: -g.degree(v)):
        if s in seen:
            continue
        seen.add(s)
        queue = [s]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in sorted(g.neighbors(v), key=lambda u: -g.degree(u)):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    return order


def _backtrack(g: Graph, allowed: Callable[[int, int], bool]) -> Iterator[tuple[int, ...]]:
    n = g.n
    inv = _vertex_invariants(g)
    masks = g.neighbor_masks
    order = _search_order(g)
    image = [-1] * n
    used = [False] * n

    def extend(depth: int) -> Iterator[tuple[int, ...]]:
        if depth == n:
            yield tuple(image)
            return
        v = order[depth]
        for u in range(n):
            if used[u] or inv[u] != inv[v] or not allowed(v, u):
                continue
            ok = True
            for w in order[:depth]:
                if (masks[v] >> w & 1) != (masks[u] >> image[w] & 1):
                    ok = False
                    break
            if not ok:
                continue
            image[v] = u
            used[u] = True
            yield from extend(depth + 1)
            used[u] = False
            image[v] = -1

    yield from extend(0)


def automorphisms(g: Graph) -> AutomorphismSet:
    """All automorphisms, by backtracking over degree-refined candidates (``n <= 12``)."""
    if g.n > MAX_AUT_ORDER:
        raise UnsupportedGraphError(f"exhaustive automorphism search supports n <= {MAX_AUT_ORDER}, got {g.n}")
    perms = tuple(sorted(_backtrack(g, lambda v, u: True)))
    A = adjacency_matrix(g)
    for p in perms:
        P = RationalMatrix([[1 if p[j] == i else 0 for j in range(g.n)] for i in range(g.n)])
        if not P.commutes_with(A):
            raise AssertionError(f"permutation {p} does not commute with A")
    return AutomorphismSet(n=g.n, perms=perms)


def unique_fixed_point_vertices(g: Graph, aut: AutomorphismSet | None = None) -> list[int]:
    """Vertices ``a`` that are the only fixed point of some automorphism."""
    if aut is not None:
        return sorted({fp[0] for p in aut.perms if len(fp := aut.fixed_points(p)) == 1})
    if g.n > MAX_AUT_ORDER:
        raise UnsupportedGraphError(f"automorphism search supports n <= {MAX_AUT_ORDER}, got {g.n}")
    out = []
    for a in range(g.n):
        search = _backtrack(g, lambda v, u, a=a: u == a if v == a else u not in (a, v))
        if next(search, None) is not None:
            out.append(a)
    return out


# -- rank bounds ----------------------------------------------------------------


@dataclass(frozen=True)
class Bound:
    name: str
    kind: str        # "upper" or "lower"
    value: int
    satisfied: bool

    def to_json(self) -> dict:
        return {"name": self.name, "kind": self.kind, "value": self.value, "satisfied": self.satisfied}


@dataclass
class RankReport:
    n: int
    rank: int
    simple_spectrum: bool
    bounds: list[Bound] = field(default_factory=list)
    trace: Fraction | None = None
    amm_spectrum: list[float] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(b.satisfied for b in self.bounds)

    def violations(self) -> list[Bound]:
        return [b for b in self.bounds if not b.satisfied]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "rank": self.rank,
            "simple_spectrum": self.simple_spectrum,
            "bounds": [b.to_json() for b in self.bounds],
            "trace": None if self.trace is None else format_rational(self.trace),
            "amm_spectrum": list(self.amm_spectrum),
        }


def fixed_point_bound(g: Graph, aut: AutomorphismSet | None = None, rank: int | None = None) -> int:
    """Lower bound ``|S| + 1`` on the rank from vertices that are unique fixed points.

    ``S`` must be a proper subset, so with ``q`` qualifying vertices the bound
    is ``min(q, n - 1) + 1``, or 1 when none qualify.  If ``rank`` is given the
    bound is asserted against it.
    """
    q = len(unique_fixed_point_vertices(g, aut))
    bound = min(q, g.n - 1) + 1 if q else 1
    if rank is not None and rank < bound:
        raise AssertionError(f"rank {rank} below fixed-point bound {bound} for {g!r}")
    return bound


def check_rank_bounds(
    g: Graph,
    rank: int,
    simple_spectrum: bool,
    cls: GraphClass | None = None,
    fixed_point: int | None = None,
) -> RankReport:
    """Apply every rank bound whose hypotheses hold; violations are flagged, not raised."""
    cls = classify(g) if cls is None else cls
    n = g.n
    bounds = []
    if simple_spectrum and n >= 2:
        bounds.append(Bound("simple spectrum: rank <= n-1", "upper", n - 1, rank <= n - 1))
        if cls.is_regular and n >= 4:
            bounds.append(Bound("simple regular: rank <= n-3", "upper", n - 3, rank <= n - 3))
    if simple_spectrum and cls.bipartite:
        cap = (n + 1) // 2
        bounds.append(Bound("simple bipartite: rank <= floor((n+1)/2)", "upper", cap, rank <= cap))
    if fixed_point is not None:
        bounds.append(Bound("unique fixed points: rank >= |S|+1", "lower", fixed_point, rank >= fixed_point))
    return RankReport(n=n, rank=rank, simple_spectrum=simple_spectrum, bounds=bounds)


@dataclass
class CorollaryReport:
    applies: bool
    ok: bool
    fixed_point_free: list[tuple[int, ...]] = field(default_factory=list)


def fixed_point_corollary_check(g: Graph, rank: int | None = None, simple_spectrum: bool | None = None) -> CorollaryReport:
    """Connected, ``n >= 3``, simple spectrum and rank ``n-1`` imply every automorphism fixes a vertex."""
    if rank is None or simple_spectrum is None:
        cb = cm.commutant_basis(adjacency_matrix(g))
        rank = cm.average_mixing_exact(cb).rank
        simple_spectrum = cb.simple_spectrum
    applies = classify(g).connected and g.n >= 3 and simple_spectrum and rank == g.n - 1
    if not applies:
        return CorollaryReport(applies=False, ok=True)
    aut = automorphisms(g)
    bad = [p for p in aut.perms if not aut.fixed_points(p)]
    return CorollaryReport(applies=True, ok=not bad, fixed_point_free=bad)


def amm_summary(amm: cm.AverageMixingMatrix) -> tuple[Fraction, list[float]]:
    """Exact trace and descending float eigenvalues of the average mixing matrix."""
    evals = np.linalg.eigvalsh(amm.matrix.to_numpy())
    return amm.matrix.trace(), sorted((float(x) for x in evals), reverse=True)


def rank_report(g: Graph, with_fixed_point: bool = True) -> RankReport:
    cb = cm.commutant_basis(adjacency_matrix(g))
    amm = cm.average_mixing_exact(cb)
    fp = fixed_point_bound(g) if with_fixed_point and g.n <= MAX_AUT_ORDER else None
    rep = check_rank_bounds(g, amm.rank, cb.simple_spectrum, fixed_point=fp)
    rep.trace, rep.amm_spectrum = amm_summary(amm)
    return rep


# -- whole-graph property check ------------------------------------------------------


def random_rational_matrix(n: int, rng: random.Random, max_num: int = 9, max_den: int = 6) -> RationalMatrix:
    return RationalMatrix(
        [[Fraction(rng.randint(-max_num, max_num), rng.randint(1, max_den)) for _ in range(n)] for _ in range(n)]
    )


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def check_graph(g: Graph, samples: int = 50, seed: int = 0, tol: float | None = None) -> list[CheckResult]:
    """Run every lemma as an executable property on one graph."""
    tol = float_tolerance() if tol is None else tol
    rng = random.Random(seed)
    n = g.n
    A = adjacency_matrix(g)
    cb = cm.commutant_basis(A)
    sd = sp.decompose(A.to_numpy())
    amm = cm.average_mixing_exact(cb)
    out: list[CheckResult] = []

    def add(name: str, passed: bool, detail: str = "") -> None:
        out.append(CheckResult(name, bool(passed), detail))

    res = sd.residuals(A.to_numpy())
    add("spectral idempotents", sd.check(A.to_numpy()) and not sd.ambiguous, str(res))
    add("commutant basis commutes with A", all(A.commutes_with(B) for B in cb.matrices()))
    add(
        "dim cmm(A) = sum of squared multiplicities",
        cb.dim == sum(m * m for m in sd.mults),
        f"{cb.dim} vs {sum(m * m for m in sd.mults)}",
    )
    kron = sp.psi_kron_matrix(sd)
    exact_P = np.array(
        [[float(x) for x in cb.combine(cb.coordinates([Fraction(int(k == j)) for k in range(n * n)]))] for j in range(n * n)]
    ).T
    add("projection matrix = sum_r E_r kron E_r", np.abs(kron - exact_P).max() <= tol)
    add("trace of projection = dim cmm(A)", abs(np.trace(kron) - cb.dim) <= 1e-6)

    idem = selfadj = image = True
    for _ in range(samples):
        M = random_rational_matrix(n, rng)
        N = random_rational_matrix(n, rng)
        PM = cm.project_commutant(cb, M)
        PN = cm.project_commutant(cb, N)
        idem &= cm.project_commutant(cb, PM) == PM
        selfadj &= M.inner(PN) == PM.inner(N)
        image &= PM.commutes_with(A)
    image &= all(cm.project_commutant(cb, B) == B for B in cb.matrices())
    add("projection idempotent", idem)
    add("projection self-adjoint", selfadj)
    add("projection image is cmm(A)", image)

    states = cm.average_states(cb)
    bad_states = [f"{s.vertex}: {v}" for s in states for v in s.violations(A)]
    add("average states are commuting density matrices", not bad_states, "; ".join(bad_states))
    add("Gram of average states = average mixing matrix", cm.gram_of_average_states(cb) == amm.matrix)
    add("average mixing matrix symmetric, doubly stochastic, PSD", not amm.violations(), "; ".join(amm.violations()))

    numeric = sp.avg_mixing_numeric(sd)
    dev = float(np.abs(numeric - amm.matrix.to_numpy()).max())
    add("exact = sum of Schur squares of idempotents", dev <= tol, f"max deviation {dev:.3g}")
    frank = sp.float_rank(numeric)
    add("float rank agrees with exact rank", frank == amm.rank, f"float {frank}, exact {amm.rank}")

    dec = cm.decomposition_check(cb)
    add("cmm(A) = span of average states (+) zero-diagonal part", dec.ok, "; ".join(dec.failures))

    # kernel_diag_check raises if the two sides of the equivalence disagree
    try:
        kernel_ok = all(cm.kernel_diag_check(cb, RationalMatrix.diagonal(v)) for v in nullspace(amm.matrix))
        for _ in range(5):
            cm.kernel_diag_check(cb, RationalMatrix.diagonal(random_rational_matrix(n, rng).diag()))
    except AssertionError:
        kernel_ok = False
    add("Psi(D) = 0 iff diag Psi(D) = 0", kernel_ok)

    fp = fixed_point_bound(g) if n <= MAX_AUT_ORDER else None
    rep = check_rank_bounds(g, amm.rank, cb.simple_spectrum, fixed_point=fp)
    add("rank bounds", rep.ok, "; ".join(b.name for b in rep.violations()))
    if n <= MAX_AUT_ORDER:
        cor = fixed_point_corollary_check(g, amm.rank, cb.simple_spectrum)
        add("simple spectrum and rank n-1 imply no fixed-point-free automorphism", cor.ok)
    return out
