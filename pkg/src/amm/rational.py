"""Dense matrices over the rationals.

Entries are :class:`fractions.Fraction`, so every result is exact and always
in lowest terms.  Vectors are plain lists of Fractions; ``vec`` stacks the
columns of a matrix, which makes ``vec(C N B^T) == kron(B, C) @ vec(N)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "RationalMatrix",
    "SingularMatrixError",
    "as_fraction",
    "format_rational",
    "parse_rational",
    "rref",
    "rank",
    "nullspace",
    "inverse",
    "project_onto_span",
    "dot",
    "is_psd",
]


class SingularMatrixError(ValueError):
    """Raised when an exact inverse or projection needs a nonsingular Gram matrix."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("refusing to convert a float to an exact rational")
    return Fraction(x)


def format_rational(x: Fraction) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is one."""
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    total = Fraction(0)
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


class RationalMatrix:
    """Immutable dense matrix of Fractions, stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, entries: Iterable[Iterable]):
        data = tuple(tuple(as_fraction(x) for x in row) for row in entries)
        if not data or not data[0]:
            raise ValueError("matrix dimensions must be positive")
        width = len(data[0])
        if any(len(row) != width for row in data):
            raise ValueError("ragged rows")
        self.rows = len(data)
        self.cols = width
        self._data = data

    # -- constructors --------------------------------------------------

    @classmethod
    def _wrap(cls, data: tuple[tuple[Fraction, ...], ...]) -> RationalMatrix:
        m = object.__new__(cls)
        m.rows = len(data)
        m.cols = len(data[0])
        m._data = data
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> RationalMatrix:
        cols = rows if cols is None else cols
        z = Fraction(0)
        return cls._wrap(tuple((z,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> RationalMatrix:
        return cls.diagonal([1] * n)

    @classmethod
    def ones(cls, rows: int, cols: int | None = None) -> RationalMatrix:
        cols = rows if cols is None else cols
        one = Fraction(1)
        return cls._wrap(tuple((one,) * cols for _ in range(rows)))

    @classmethod
    def diagonal(cls, diag: Sequence) -> RationalMatrix:
        n = len(diag)
        z = Fraction(0)
        return cls._wrap(
            tuple(
                tuple(as_fraction(diag[i]) if i == j else z for j in range(n))
                for i in range(n)
            )
        )

    @classmethod
    def from_vec(cls, v: Sequence, n: int) -> RationalMatrix:
        """Inverse of :meth:`vec` for an ``n x n`` matrix."""
        if len(v) != n * n:
            raise ValueError(f"vector of length {len(v)} is not vec of an {n}x{n} matrix")
        return cls._wrap(
            tuple(tuple(as_fraction(v[j * n + i]) for j in range(n)) for i in range(n))
        )

    @classmethod
    def column(cls, v: Sequence) -> RationalMatrix:
        return cls._wrap(tuple((as_fraction(x),) for x in v))

    # -- access --------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        return self._data[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._data[i]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._data]

    def diag(self) -> list[Fraction]:
        return [self._data[i][i] for i in range(min(self.rows, self.cols))]

    def vec(self) -> list[Fraction]:
        return [self._data[i][j] for j in range(self.cols) for i in range(self.rows)]

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self._data], dtype=float)

    def to_strings(self) -> list[list[str]]:
        return [[format_rational(x) for x in r] for r in self._data]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self._data == other._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._data)
        return f"RationalMatrix[{body}]"

    # -- algebra -------------------------------------------------------

    def _check_same_shape(self, other: RationalMatrix) -> None:
        if self.shape != other.shape:
            raise ValueError(f"dimension mismatch: {self.shape} vs {other.shape}")

    def __add__(self, other: RationalMatrix) -> RationalMatrix:
        self._check_same_shape(other)
        return RationalMatrix._wrap(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self._data, other._data))
        )

    def __sub__(self, other: RationalMatrix) -> RationalMatrix:
        self._check_same_shape(other)
        return RationalMatrix._wrap(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self._data, other._data))
        )

    def __neg__(self) -> RationalMatrix:
        return self.scale(-1)

    def scale(self, c) -> RationalMatrix:
        c = as_fraction(c)
        return RationalMatrix._wrap(tuple(tuple(c * a for a in r) for r in self._data))

    def __matmul__(self, other: RationalMatrix) -> RationalMatrix:
        if self.cols != other.rows:
            raise ValueError(f"dimension mismatch: {self.shape} @ {other.shape}")
        cols = list(zip(*other._data))
        out = []
        for r in self._data:
            nz = [(k, a) for k, a in enumerate(r) if a]
            out.append(tuple(sum((a * c[k] for k, a in nz), Fraction(0)) for c in cols))
        return RationalMatrix._wrap(tuple(out))

    def matvec(self, v: Sequence[Fraction]) -> list[Fraction]:
        if len(v) != self.cols:
            raise ValueError(f"dimension mismatch: {self.shape} @ ({len(v)},)")
        return [dot(r, v) for r in self._data]

    def transpose(self) -> RationalMatrix:
        return RationalMatrix._wrap(tuple(zip(*self._data)))

    @property
    def T(self) -> RationalMatrix:
        return self.transpose()

    def schur(self, other: RationalMatrix) -> RationalMatrix:
        """Entrywise product."""
        self._check_same_shape(other)
        return RationalMatrix._wrap(
            tuple(tuple(a * b for a, b in zip(r, s)) for r, s in zip(self._data, other._data))
        )

    def kron(self, other: RationalMatrix) -> RationalMatrix:
        out = []
        for r in self._data:
            for s in other._data:
                out.append(tuple(a * b for a in r for b in s))
        return RationalMatrix._wrap(tuple(out))

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return sum(self.diag(), Fraction(0))

    def inner(self, other: RationalMatrix) -> Fraction:
        """Trace inner product ``tr(self^T other)``."""
        self._check_same_shape(other)
        total = Fraction(0)
        for r, s in zip(self._data, other._data):
            total += dot(r, s)
        return total

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self._data[i][j] == self._data[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def is_diagonal(self) -> bool:
        return self.is_square() and all(
            not self._data[i][j]
            for i in range(self.rows)
            for j in range(self.cols)
            if i != j
        )

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._data)

    def commutes_with(self, other: RationalMatrix) -> bool:
        return self @ other == other @ self


def _rows_of(M) -> list[list[Fraction]]:
    if isinstance(M, RationalMatrix):
        return M.tolist()
    return [[as_fraction(x) for x in r] for r in M]


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in row:
        if x.denominator != 1:
            den = math.lcm(den, x.denominator)
    return [x.numerator * (den // x.denominator) for x in row]


def _int_rref(rows: list[list[int]], ncols: int) -> list[int]:
    """Fraction-free Gauss-Jordan on integer rows, in place; returns pivot columns.

    Each pivot row keeps its own (nonzero) pivot value rather than 1; rows are
    divided by their content after every update so entries stay small.
    Pivots are only sought in the first ``ncols`` columns, but every column is
    updated, so an augmented block to the right is carried along.
    """
    pivots: list[int] = []
    nrows = len(rows)
    width = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        cands = [i for i in range(r, nrows) if rows[i][c]]
        if not cands:
            continue
        p = min(cands, key=lambda i: abs(rows[i][c]))
        rows[r], rows[p] = rows[p], rows[r]
        prow = rows[r]
        pv = prow[c]
        nz = [k for k in range(width) if prow[k]]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if not f:
                continue
            g = math.gcd(pv, f)
            a, b = pv // g, f // g
            if a != 1:
                row = [a * x for x in row]
            for k in nz:
                row[k] -= b * prow[k]
            g = math.gcd(*row)
            if g > 1:
                row = [x // g for x in row]
            rows[i] = row
        pivots.append(c)
        r += 1
    return pivots


def rref(M) -> tuple[RationalMatrix, list[int], int]:
    """Reduced row-echelon form over Q: ``(R, pivot_columns, rank)``."""
    rows = [_integer_row(r) for r in _rows_of(M)]
    pivots = _int_rref(rows, len(rows[0]))
    out = []
    for i, r in enumerate(rows):
        if i < len(pivots):
            pv = r[pivots[i]]
            out.append([Fraction(x, pv) for x in r])
        else:
            out.append([Fraction(0)] * len(r))
    return RationalMatrix(out), pivots, len(pivots)


def rank(M) -> int:
    rows = [_integer_row(r) for r in _rows_of(M)]
    if not rows:
        return 0
    return len(_int_rref(rows, len(rows[0])))


def nullspace(M) -> list[list[Fraction]]:
    """Exact kernel basis, one vector per free column, scaled to integer entries."""
    rows = [_integer_row(r) for r in _rows_of(M)]
    ncols = len(rows[0])
    pivots = _int_rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, pc in enumerate(pivots):
            if rows[i][free]:
                v[pc] = Fraction(-rows[i][free], rows[i][pc])
        basis.append(_integer_row(v))
    return [[Fraction(x) for x in v] for v in basis]


def inverse(M: RationalMatrix) -> RationalMatrix:
    if not M.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = M.rows
    one, zero = Fraction(1), Fraction(0)
    rows = [
        _integer_row(list(r) + [one if i == j else zero for j in range(n)])
        for i, r in enumerate(M.tolist())
    ]
    pivots = _int_rref(rows, n)
    if len(pivots) != n:
        raise SingularMatrixError("matrix is singular")
    return RationalMatrix([[Fraction(x, r[i]) for x in r[n:]] for i, r in enumerate(rows)])


def project_onto_span(B: Sequence[Sequence], v: Sequence) -> list[Fraction]:
    """Orthogonal projection of ``v`` onto the span of the vectors in ``B``.

    Uses the normal equations ``B (B^T B)^{-1} B^T v`` with an exact inverse,
    so ``B`` must be linearly independent.
    """
    B = [[as_fraction(x) for x in b] for b in B]
    v = [as_fraction(x) for x in v]
    if not B:
        return [Fraction(0)] * len(v)
    if any(len(b) != len(v) for b in B):
        raise ValueError("basis vectors and v differ in length")
    gram = RationalMatrix([[dot(b, c) for c in B] for b in B])
    try:
        ginv = inverse(gram)
    except SingularMatrixError:
        raise SingularMatrixError("basis vectors are linearly dependent") from None
    coeffs = ginv.matvec([dot(b, v) for b in B])
    out = [Fraction(0)] * len(v)
    for c, b in zip(coeffs, B):
        if c:
            for k, x in enumerate(b):
                if x:
                    out[k] += c * x
    return out


def is_psd(M: RationalMatrix) -> tuple[bool, list[Fraction]]:
    """Exact PSD test by symmetric elimination with diagonal pivoting.

    Returns ``(psd, pivots)``.  A negative pivot, or a zero diagonal whose row
    is not zero, certifies that ``M`` is not positive semidefinite.
    """
    if not M.is_symmetric():
        return False, []
    a = M.tolist()
    n = M.rows
    active = list(range(n))
    pivots: list[Fraction] = []
    while active:
        k = max(active, key=lambda i: a[i][i])
        d = a[k][k]
        if d < 0:
            return False, pivots + [d]
        if d == 0:
            # every remaining diagonal entry is zero, so the rest must vanish
            if any(a[i][j] for i in active for j in active):
                return False, pivots
            break
        pivots.append(d)
        active.remove(k)
        rk = a[k]
        for i in active:
            f = a[i][k]
            if f:
                f = f / d
                ri = a[i]
                for j in active:
                    if rk[j]:
                        ri[j] -= f * rk[j]
    return True, pivots
