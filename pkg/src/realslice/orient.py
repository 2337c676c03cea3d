"""Orientations, complex orientations and the pointwise sign rules.

Subspaces are carried as explicit bases in ambient coordinates and every sign
is the sign of an exact rational determinant.  Column vectors are tuples of
``Fraction``.  Complex vectors are realified in the interleaved convention
``(re z1, im z1, re z2, im z2, ...)`` so that the complex orientation is the
one taking ``+1`` on ``(e1, i e1, e2, i e2, ...)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DifferentSpans, NotComplementary, NotTransverse, RankDeficient, Singular
from .poly import GaussianRational, as_fraction

Vector = tuple[Fraction, ...]


# ---------------------------------------------------------------------------
# exact elimination


def _row_reduce(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (rref, pivot columns)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def det(rows: Sequence[Sequence]) -> Fraction:
    n = len(rows)
    m = [[as_fraction(v) for v in row] for row in rows]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        result *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return sign * result


def rank(columns: Sequence[Sequence]) -> int:
    if not columns:
        return 0
    rows = [list(r) for r in zip(*columns)]
    return len(_row_reduce(rows, len(columns))[1])


def solve(columns: Sequence[Vector], rhs: Sequence[Vector]) -> list[list[Fraction]] | None:
    """Coefficients ``T`` with ``columns @ T == rhs`` (one column of T per rhs),
    or None if some right-hand side lies outside the span.  ``columns`` must be
    linearly independent."""
    k = len(columns)
    n = len(columns[0]) if columns else len(rhs[0])
    aug = [[columns[j][i] for j in range(k)] + [b[i] for b in rhs] for i in range(n)]
    red, pivots = _row_reduce(aug, k + len(rhs))
    if pivots[:k] != list(range(k)) or any(p >= k for p in pivots):
        return None
    return [[red[i][k + j] for j in range(len(rhs))] for i in range(k)]


def nullspace(columns: Sequence[Vector]) -> list[Vector]:
    """Basis of ``{c : columns @ c == 0}``."""
    k = len(columns)
    n = len(columns[0])
    rows = [[columns[j][i] for j in range(k)] for i in range(n)]
    red, pivots = _row_reduce(rows, k)
    free = [c for c in range(k) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * k
        vec[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -red[r][f]
        basis.append(tuple(vec))
    return basis


def _sign(value: Fraction) -> int:
    return (value > 0) - (value < 0)


def _vec(v) -> Vector:
    return tuple(as_fraction(c) for c in v)


def combine(columns: Sequence[Vector], coeffs: Sequence[Fraction]) -> Vector:
    n = len(columns[0])
    return tuple(sum((c[i] * a for c, a in zip(columns, coeffs)), Fraction(0)) for i in range(n))


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class BasisMatrix:
    """``k`` independent columns in ``R^n``."""

    columns: tuple[Vector, ...]
    dim: int

    def __init__(self, columns: Sequence[Sequence], dim: int | None = None):
        cols = tuple(_vec(c) for c in columns)
        if dim is None:
            if not cols:
                raise ValueError("an empty basis needs an explicit ambient dimension")
            dim = len(cols[0])
        if any(len(c) != dim for c in cols):
            raise ValueError("all columns must have the ambient dimension")
        if rank(cols) != len(cols):
            raise RankDeficient("columns are linearly dependent", columns=[list(map(str, c)) for c in cols])
        object.__setattr__(self, "columns", cols)
        object.__setattr__(self, "dim", dim)

    @property
    def k(self) -> int:
        return len(self.columns)

    @classmethod
    def standard(cls, n: int) -> "BasisMatrix":
        return cls([tuple(Fraction(int(i == j)) for i in range(n)) for j in range(n)])

    def __add__(self, other: "BasisMatrix") -> "BasisMatrix":
        """Concatenation of the two column lists."""
        return BasisMatrix(self.columns + other.columns, self.dim)

    def det(self) -> Fraction:
        if self.k != self.dim:
            raise ValueError("determinant needs a square basis")
        return det([list(r) for r in zip(*self.columns)])


@dataclass(frozen=True)
class OrientationSign:
    value: int
    reference: BasisMatrix | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.value not in (1, -1):
            raise ValueError("an orientation sign is +1 or -1")

    def __int__(self):
        return self.value

    def __mul__(self, other: "OrientationSign") -> "OrientationSign":
        return OrientationSign(self.value * int(other), self.reference)


@dataclass(frozen=True)
class ComplexMatrix:
    """Square Gaussian-rational matrix acting as ``v -> M v`` or ``v -> M conj(v)``."""

    rows: tuple[tuple[GaussianRational, ...], ...]
    semilinear: bool = False

    def __init__(self, rows: Sequence[Sequence], semilinear: bool = False):
        rows = tuple(tuple(GaussianRational.coerce(v) for v in r) for r in rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("ComplexMatrix must be square")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "semilinear", semilinear)

    @property
    def size(self) -> int:
        return len(self.rows)

    def apply(self, v: Sequence[GaussianRational]) -> tuple[GaussianRational, ...]:
        v = [GaussianRational.coerce(c) for c in v]
        if self.semilinear:
            v = [c.conjugate() for c in v]
        return tuple(sum((a * b for a, b in zip(row, v)), GaussianRational(0)) for row in self.rows)

    def realified(self) -> list[list[Fraction]]:
        """The 2k x 2k real matrix in the interleaved bases on both sides."""
        k = self.size
        cols = []
        for j in range(k):
            e = [GaussianRational(0)] * k
            e[j] = GaussianRational(1)
            ie = [GaussianRational(0)] * k
            ie[j] = GaussianRational(0, 1)
            cols.append(realify_vector(self.apply(e)))
            cols.append(realify_vector(self.apply(ie)))
        return [list(r) for r in zip(*cols)]


def realify_vector(v: Sequence) -> Vector:
    out = []
    for c in v:
        c = GaussianRational.coerce(c)
        out.extend((c.re, c.im))
    return tuple(out)


@dataclass(frozen=True)
class QuotientBasis:
    """An oriented basis of ``R^n / T``: representatives plus a basis of ``T``."""

    reps: tuple[Vector, ...]
    sub: tuple[Vector, ...]
    dim: int

    def __init__(self, reps: Sequence[Sequence], sub: Sequence[Sequence], dim: int | None = None):
        reps = tuple(_vec(v) for v in reps)
        sub = tuple(_vec(v) for v in sub)
        if dim is None:
            dim = len((reps + sub)[0])
        if rank(reps + sub) != len(reps) + len(sub) or len(reps) + len(sub) != dim:
            raise RankDeficient("representatives and subspace basis do not span the ambient space")
        object.__setattr__(self, "reps", reps)
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "dim", dim)

    @property
    def codim(self) -> int:
        return len(self.reps)

    def orientation_of_point(self) -> int:
        """Sign of the representatives against the standard basis when ``T = 0``."""
        if self.sub:
            raise ValueError("only defined for a zero-dimensional subspace")
        return _sign(BasisMatrix(self.reps).det())


# ---------------------------------------------------------------------------
# operations


def orientation_sign(b: BasisMatrix, b_ref: BasisMatrix) -> OrientationSign:
    """``sign det T`` where ``b = b_ref T``."""
    if b.dim != b_ref.dim or b.k != b_ref.k:
        raise DifferentSpans("bases have different sizes")
    T = solve(b_ref.columns, b.columns)
    if T is None:
        raise DifferentSpans("the bases span different subspaces")
    return OrientationSign(_sign(det(T)), b_ref)


def complex_orientation_basis(complex_basis: Sequence[Sequence]) -> BasisMatrix:
    """``(e1, i e1, ..., ek, i ek)`` realified."""
    cols = []
    for e in complex_basis:
        e = [GaussianRational.coerce(c) for c in e]
        cols.append(realify_vector(e))
        cols.append(realify_vector([c * GaussianRational(0, 1) for c in e]))
    return BasisMatrix(cols)


def semilinear_pullback_sign(f: ComplexMatrix, k: int | None = None) -> OrientationSign:
    """Sign by which ``f`` pulls back the complex orientation of ``C^k``."""
    if k is not None and k != f.size:
        raise ValueError(f"matrix acts on C^{f.size}, not C^{k}")
    d = det(f.realified())
    if d == 0:
        raise Singular("map is not invertible")
    return OrientationSign(_sign(d))


def ses_orientation(a_basis: BasisMatrix, c_lifts: BasisMatrix) -> BasisMatrix:
    """Basis of B related to bases of A and C = B/A: lifts of C first, then A."""
    if a_basis.dim != c_lifts.dim:
        raise NotComplementary("ambient dimensions differ")
    cols = c_lifts.columns + a_basis.columns
    if len(cols) != a_basis.dim or rank(cols) != len(cols):
        raise NotComplementary("lifts and subspace basis do not form a basis")
    return BasisMatrix(cols)


def _quotient_coords(q: QuotientBasis, vectors: Sequence[Vector]) -> list[list[Fraction]]:
    coeffs = solve(q.reps + q.sub, vectors)
    assert coeffs is not None  # reps + sub is a basis
    return coeffs[: q.codim]


def intersection_sign(tangent_Y: BasisMatrix, coorient_Z: QuotientBasis) -> OrientationSign:
    """Local intersection number of an oriented Y with a cooriented Z."""
    if tangent_Y.k != coorient_Z.codim:
        raise NotTransverse("dim Y must equal codim Z")
    T = _quotient_coords(coorient_Z, tangent_Y.columns)
    d = det(T)
    if d == 0:
        raise NotTransverse("projection of T_pY onto the normal space is singular")
    return OrientationSign(_sign(d))


def cup_coorientation(coorient_Y: QuotientBasis, coorient_Z: QuotientBasis) -> QuotientBasis:
    """Coorientation of ``Y cap Z`` via ``N(Y cap Z) = N(Z) + N(Y)``.

    ``coorient_*.sub`` are the tangent spaces.  The Z-normal representatives
    are lifted into ``T_pY`` and the Y-normal ones into ``T_pZ``; the result
    lists the Z block first.
    """
    TY, TZ = coorient_Y.sub, coorient_Z.sub
    n = coorient_Y.dim
    if rank(TY + TZ) != n:
        raise NotTransverse("T_pY + T_pZ is not the whole tangent space")
    # intersection T_pY cap T_pZ from the kernel of [TY | -TZ]
    kernel = nullspace(TY + tuple(tuple(-c for c in v) for v in TZ))
    inter = [combine(TY, k[: len(TY)]) for k in kernel]
    inter = _independent(inter)

    def lift(vectors, target, other):
        # write v = target @ a + other @ b, keep target @ a
        basis = _independent(list(target) + list(other))
        out = []
        for v in vectors:
            coeffs = solve(basis, [v])
            assert coeffs is not None
            # basis starts with an independent subset of target
            n_target = sum(1 for b in basis if b in target)
            out.append(combine(basis[:n_target], [c[0] for c in coeffs[:n_target]]))
        return out

    reps = lift(coorient_Z.reps, TY, TZ) + lift(coorient_Y.reps, TZ, TY)
    return QuotientBasis(reps, inter, n)


def _independent(vectors: list[Vector]) -> list[Vector]:
    out: list[Vector] = []
    for v in vectors:
        if rank(out + [v]) > len(out):
            out.append(v)
    return out
