"""Certified isolation of the real base points of a pencil on RP^2.

Each affine chart is solved by elimination: after a rational shear
``X = s + c*t`` the resultant in ``t`` is a univariate polynomial in ``X``
whose real roots are isolated exactly, and the first subresultant
``s11(X)*t + s10(X)`` recovers ``t`` as a rational function of ``X``.  The
shear is rejected unless ``s11`` has no real common root with the square-free
eliminant, so every real root of the eliminant carries exactly one common
solution, and the root's multiplicity is the intersection multiplicity there.

Points are owned by the first chart in the order z, y, x whose coordinate is
nonzero.  Nothing in the pipeline is floating point except the subdivision
oracle, which is only used as an independent cross-check.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy
from sympy import QQ, Poly
from sympy.polys.matrices import DomainMatrix

from .errors import CommonFactor, DegreeMismatch, DegreeZero, Degenerate, InconsistentDims, InvariantBreach, MalformedInput, SingularOrTangent
from .interval import Interval, eval_real_form, horner
from .poly import HomPoly, as_fraction, realify

_s, _t, _X, _x, _y, _z = sympy.symbols("s t X x y z")
_K = QQ[_X]

# shears tried in order; 0 first so that generic inputs keep readable eliminants
_SHEARS = [Fraction(0)] + [
    sgn * Fraction(p, q) for p, q in [(1, 1), (2, 1), (1, 2), (3, 1), (1, 3), (3, 2), (2, 3), (5, 1), (4, 3), (5, 2), (7, 3)]
    for sgn in (1, -1)
]
_MAX_REFINE = 400


class ChartId(enum.Enum):
    """Affine chart ``{coordinate = 1}``; chart coordinates are the other two, in order."""

    Z = "z"
    Y = "y"
    X = "x"

    @property
    def index(self) -> int:
        return {"x": 0, "y": 1, "z": 2}[self.value]

    @property
    def axes(self) -> tuple[int, int]:
        return {"z": (0, 1), "y": (0, 2), "x": (1, 2)}[self.value]

    @property
    def orientation(self) -> int:
        """``det[e_k, e_i, e_j]``: how the chart frame sits in R^3 next to the lift."""
        return {"z": 1, "y": -1, "x": 1}[self.value]

    def lift(self, a, b) -> tuple:
        i, j = self.axes
        out = [None, None, None]
        out[self.index], out[i], out[j] = 1, a, b
        if isinstance(a, Interval) or isinstance(b, Interval):
            out[self.index] = Interval(1)
        return tuple(out)

    def __str__(self):
        return f"{self.value}=1"


CHART_ORDER = (ChartId.Z, ChartId.Y, ChartId.X)


# ---------------------------------------------------------------------------
# univariate helpers on ascending Fraction coefficient lists


def _peval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _coeffs(p: Poly) -> tuple[Fraction, ...]:
    return tuple(as_fraction(c) for c in reversed(p.all_coeffs()))


@dataclass(frozen=True)
class _Eliminant:
    """Everything needed to refine one root: shear, swap flag and the polynomials in X."""

    shear: Fraction
    swapped: bool
    h: tuple[Fraction, ...]  # square-free eliminant, ascending
    s11: tuple[Fraction, ...]
    s10: tuple[Fraction, ...]

    def bisect(self, iv: Interval) -> Interval:
        if iv.width == 0:
            return iv
        m = iv.mid
        hm = _peval(self.h, m)
        if hm == 0:
            return Interval(m)
        if _sign(hm) == _sign(_peval(self.h, iv.lo)):
            return Interval(m, iv.hi)
        return Interval(iv.lo, m)

    def box(self, iv: Interval) -> tuple[Interval, Interval] | None:
        """Chart-coordinate box for the root in ``iv``; None if ``s11`` is not yet certified nonzero."""
        den = horner(self.s11, iv)
        if den.contains(0):
            return None
        t = -horner(self.s10, iv) / den
        s = iv - t * self.shear
        return (t, s) if self.swapped else (s, t)

    def describe(self) -> str:
        expr = sum(sympy.Rational(c.numerator, c.denominator) * _X**k for k, c in enumerate(self.h))
        return str(sympy.expand(expr))


@dataclass(frozen=True)
class CertifiedBasePoint:
    """A real base point isolated in the chart that owns it.

    ``box`` holds intervals for the two chart coordinates and contains exactly
    one solution of the dehomogenized system.  ``root_interval`` isolates the
    corresponding root of the square-free eliminant.
    """

    chart: ChartId
    box: tuple[Interval, Interval]
    multiplicity: int
    root_interval: Interval
    eliminant: _Eliminant

    def homogeneous_box(self) -> tuple[Interval, Interval, Interval]:
        return self.chart.lift(*self.box)

    def approx(self) -> tuple[float, float, float]:
        return tuple(float(iv.mid) for iv in self.homogeneous_box())

    @property
    def width(self) -> Fraction:
        return max(self.box[0].width, self.box[1].width)

    def contains(self, a, b) -> bool:
        return self.box[0].contains(a) and self.box[1].contains(b)

    def overlaps(self, other: "CertifiedBasePoint") -> bool:
        return self.chart == other.chart and all(p.overlaps(q) for p, q in zip(self.box, other.box))

    def to_dict(self) -> dict:
        return {
            "chart": str(self.chart),
            "box": [iv.as_strings() for iv in self.box],
            "multiplicity": self.multiplicity,
            "eliminant": self.eliminant.describe(),
            "root_interval": self.root_interval.as_strings(),
        }


def _bisect_point(p: CertifiedBasePoint) -> CertifiedBasePoint:
    iv = p.root_interval
    while True:
        iv = p.eliminant.bisect(iv)
        box = p.eliminant.box(iv)
        if box is not None:
            return replace(p, root_interval=iv, box=box)
        if iv.width == 0:
            raise InvariantBreach("subresultant vanishes at an exact root", module="solve")


def refine_point(p: CertifiedBasePoint, width) -> CertifiedBasePoint:
    """Shrink the box of ``p`` until both sides are at most ``width``."""
    width = as_fraction(width)
    if width <= 0:
        raise MalformedInput("refinement width must be positive", module="solve")
    for _ in range(_MAX_REFINE):
        if p.width <= width:
            return p
        p = _bisect_point(p)
    raise InvariantBreach("box refinement did not converge", module="solve", width=str(width))


# ---------------------------------------------------------------------------
# chart elimination


def _to_sympy(p: HomPoly, variables=(_x, _y, _z)):
    return sum(
        (sympy.Rational(c.re.numerator, c.re.denominator) * variables[0] ** a * variables[1] ** b * variables[2] ** e
         for (a, b, e), c in p.terms),
        sympy.Integer(0),
    )


def _chart_poly(p: HomPoly, chart: ChartId) -> Poly:
    lifted = chart.lift(_s, _t)
    return Poly(_to_sympy(p, lifted), _s, _t, domain=QQ)


def _first_subresultant(F: Poly, G: Poly, m: int, n: int) -> tuple[Poly, Poly]:
    """``(s11, s10)`` with ``S1 = s11*t + s10``, for polynomials in t over QQ[X]."""
    if n == 1 or m == 1:
        lin = G if n == 1 else F
        c = Poly(lin.as_expr(), _t, domain=_K).rep.to_list()
        return Poly(_K.to_sympy(c[0]), _X, domain=QQ), Poly(_K.to_sympy(c[1]), _X, domain=QQ)
    fc = Poly(F.as_expr(), _t, domain=_K).rep.to_list()  # leading first
    gc = Poly(G.as_expr(), _t, domain=_K).rep.to_list()
    size = m + n - 2
    rows = []
    for shift, coeffs, deg in [(k, fc, m) for k in range(n - 2, -1, -1)] + [(k, gc, n) for k in range(m - 2, -1, -1)]:
        row = {}
        for i, c in enumerate(coeffs):
            row[deg - i + shift] = c
        rows.append(row)
    top = list(range(size, 1, -1))  # powers m+n-2 .. 2

    def minor(last_power: int):
        cols = top + [last_power]
        mat = [[row.get(pw, _K.zero) for pw in cols] for row in rows]
        return Poly(_K.to_sympy(DomainMatrix(mat, (size, size), _K).det()), _X, domain=QQ)

    return minor(1), minor(0)


def _sign_change_interval(h: tuple[Fraction, ...], a: Fraction, b: Fraction) -> Interval:
    """Shrink an open isolating interval until ``h`` changes sign strictly at its ends."""
    if a == b:
        return Interval(a)
    w = b - a
    for k in range(0, 200):
        lo, hi = (a, b) if k == 0 else (a + w / 2 ** (k + 1), b - w / 2 ** (k + 1))
        ha, hb = _peval(h, lo), _peval(h, hi)
        if ha * hb < 0:
            return Interval(lo, hi)
    raise InvariantBreach("could not normalize an isolating interval", module="solve")


def _solve_chart(f: Poly, g: Poly, swap: bool = False) -> list[CertifiedBasePoint]:
    """All real solutions of ``f = g = 0`` in the plane with coordinates (s, t)."""
    if swap:
        f = Poly(f.as_expr().subs({_s: _t, _t: _s}, simultaneous=True), _s, _t, domain=QQ)
        g = Poly(g.as_expr().subs({_s: _t, _t: _s}, simultaneous=True), _s, _t, domain=QQ)
    df, dg = f.total_degree(), g.total_degree()
    if f.is_zero or g.is_zero:
        raise Degenerate("a chart restriction vanishes identically", module="solve")
    if df == 0 or dg == 0:
        return []
    for c in _SHEARS:
        cs = sympy.Rational(c.numerator, c.denominator)
        F = Poly(f.as_expr().subs(_s, _X - cs * _t), _t, _X, domain=QQ)
        G = Poly(g.as_expr().subs(_s, _X - cs * _t), _t, _X, domain=QQ)
        m, n = F.degree(_t), G.degree(_t)
        # degree in t equal to the total degree makes the leading coefficient constant
        if m != df or n != dg:
            continue
        res = Poly(sympy.resultant(F.as_expr(), G.as_expr(), _t), _X, domain=QQ)
        if res.is_zero:
            continue
        if res.degree() <= 0:
            return []
        s11, s10 = _first_subresultant(F, G, m, n)
        h = res.sqf_part()
        if s11.is_zero:
            continue
        common = h.gcd(s11)
        if common.degree() > 0 and common.count_roots() > 0:
            continue
        elim = _Eliminant(c, swap, _coeffs(h), _coeffs(s11), _coeffs(s10))
        points = []
        for (a, b), mult in res.intervals():
            iv = _sign_change_interval(elim.h, as_fraction(a), as_fraction(b))
            box = elim.box(iv)
            while box is None:
                iv = elim.bisect(iv)
                box = elim.box(iv)
            chart_less = CertifiedBasePoint(ChartId.Z, box, mult, iv, elim)
            points.append(chart_less)
        return points
    raise Degenerate("no admissible shear found for this chart", module="solve")


def _separate(points: list[CertifiedBasePoint]) -> list[CertifiedBasePoint]:
    """Refine until boxes are pairwise disjoint, which makes each box isolating."""
    points = list(points)
    for _ in range(_MAX_REFINE):
        clash = set()
        for i, j in itertools.combinations(range(len(points)), 2):
            if points[i].overlaps(points[j]):
                clash.update((i, j))
        if not clash:
            return points
        for i in clash:
            points[i] = _bisect_point(points[i])
    raise InvariantBreach("could not separate base point boxes", module="solve")


def _check_pair(R: HomPoly, S: HomPoly):
    for p in (R, S):
        if not p.is_real():
            raise MalformedInput("base points need real forms", module="solve", poly=str(p))
    if R.degree != S.degree:
        raise DegreeMismatch("R and S must have equal degree", module="solve", degrees=[R.degree, S.degree])
    if R.degree < 1:
        raise DegreeZero("degree must be at least 1", module="solve", degree=R.degree)
    if R.is_zero() or S.is_zero():
        raise Degenerate("one of the forms is zero; the base is a curve", module="solve")
    g = sympy.gcd(Poly(_to_sympy(R), _x, _y, _z, domain=QQ), Poly(_to_sympy(S), _x, _y, _z, domain=QQ))
    if g.total_degree() > 0:
        raise CommonFactor("R and S share a nonconstant factor", gcd=str(g.monic().as_expr()))


def _points_in_chart(R: HomPoly, S: HomPoly, chart: ChartId, swap: bool) -> list[CertifiedBasePoint]:
    pts = _solve_chart(_chart_poly(R, chart), _chart_poly(S, chart), swap)
    return _separate([replace(p, chart=chart) for p in pts])


def _line_root_count(R: HomPoly, S: HomPoly) -> int:
    """Number of real base points on ``z = 0`` other than (1:0:0)."""
    r = Poly(_to_sympy(R, (_x, 1, 0)), _x, domain=QQ)
    s = Poly(_to_sympy(S, (_x, 1, 0)), _x, domain=QQ)
    g = r.gcd(s)
    return 0 if g.degree() <= 0 else g.count_roots()


def real_base_points(R: HomPoly, S: HomPoly, eliminate: str = "y") -> list[CertifiedBasePoint]:
    """Every real solution of ``R = S = 0`` in RP^2 with an isolating box.

    ``eliminate`` chooses which chart coordinate the resultant removes
    (``"y"``: the second, ``"x"``: the first); the point set does not depend
    on it.
    """
    if eliminate not in ("x", "y"):
        raise MalformedInput("eliminate must be 'x' or 'y'", module="solve")
    _check_pair(R, S)
    swap = eliminate == "x"
    found = _points_in_chart(R, S, ChartId.Z, swap)

    on_line = _line_root_count(R, S)
    if on_line:
        cands = _points_in_chart(R, S, ChartId.Y, swap)
        for _ in range(_MAX_REFINE):
            hits = [p for p in cands if p.box[1].contains(0)]
            if len(hits) == on_line:
                break
            cands = [_bisect_point(p) if p.box[1].contains(0) else p for p in cands]
        else:
            raise InvariantBreach("points at z=0 could not be separated", module="solve")
        found += hits

    if R.coeff((R.degree, 0, 0)).is_zero() and S.coeff((S.degree, 0, 0)).is_zero():
        cands = _points_in_chart(R, S, ChartId.X, swap)
        for _ in range(_MAX_REFINE):
            hits = [p for p in cands if p.contains(0, 0)]
            if len(hits) == 1:
                break
            if not hits:
                raise InvariantBreach("(1:0:0) was not found in chart x", module="solve")
            cands = [_bisect_point(p) if p.contains(0, 0) else p for p in cands]
        else:
            raise InvariantBreach("(1:0:0) could not be isolated", module="solve")
        found += hits
    if len(found) > R.degree**2:
        raise InvariantBreach("more real base points than the Bezout bound", module="solve", count=len(found))
    return found


def real_zeros(P: HomPoly, multiplier=None) -> list[CertifiedBasePoint]:
    """Real zeros of a complex form ``P``, computed as the base of ``(Re cP, Im cP)``.

    Any nonzero Gaussian ``multiplier`` gives the same set; a nontrivial one
    makes this an elimination route independent of ``real_base_points(*realify(P))``.
    """
    if multiplier is not None:
        P = P.scale(multiplier)
    return real_base_points(*realify(P))


# ---------------------------------------------------------------------------
# Jacobian certificate


@dataclass(frozen=True)
class JacobianCertificate:
    sign: int
    enclosure: Interval
    chart: ChartId
    point: CertifiedBasePoint


def chart_box(p: CertifiedBasePoint, chart: ChartId) -> tuple[CertifiedBasePoint, tuple[Interval, Interval]]:
    """Coordinates of ``p`` in another chart, refining until the division is safe."""
    for _ in range(_MAX_REFINE):
        hb = p.homogeneous_box()
        den = hb[chart.index]
        if not den.contains(0):
            i, j = chart.axes
            return p, (hb[i] / den, hb[j] / den)
        p = _bisect_point(p)
    raise MalformedInput(f"point does not lie in chart {chart}", module="solve")


def chart_jacobian(R: HomPoly, S: HomPoly, chart: ChartId, box: Sequence[Interval]) -> Interval:
    i, j = chart.axes
    lift = chart.lift(*box)
    Ri, Rj, Si, Sj = (eval_real_form(p.diff(k), lift) for p in (R, S) for k in (i, j))
    return Ri * Sj - Rj * Si


def jacobian_certificate(R: HomPoly, S: HomPoly, p: CertifiedBasePoint, chart: ChartId | None = None) -> JacobianCertificate:
    """Certified sign of ``det d(R, S)`` in chart coordinates at ``p``.

    The owning chart is used unless ``chart`` names another chart containing
    the point.
    """
    chart = p.chart if chart is None else chart
    if p.multiplicity > 1:
        raise SingularOrTangent(
            "base point has intersection multiplicity > 1",
            point=p.to_dict(),
            multiplicity=p.multiplicity,
        )
    for _ in range(_MAX_REFINE):
        p, box = chart_box(p, chart)
        enc = chart_jacobian(R, S, chart, box)
        if enc.sign():
            return JacobianCertificate(enc.sign(), enc, chart, p)
        p = _bisect_point(p)
    raise InvariantBreach("Jacobian sign not certified at a simple point", module="solve", point=p.to_dict())


# ---------------------------------------------------------------------------
# dimension bookkeeping


@dataclass(frozen=True)
class TransversalityDefect:
    dimU: int
    dimV: int
    dimW: int
    dimIntersection: int

    @property
    def defect(self) -> int:
        return self.dimU - (self.dimV + self.dimW) + self.dimIntersection

    @property
    def transverse(self) -> bool:
        return self.defect == 0


def transversality_defect(dimU: int, dimV: int, dimW: int, dimInt: int) -> TransversalityDefect:
    dims = (dimU, dimV, dimW, dimInt)
    if any(d < 0 for d in dims) or max(dimV, dimW) > dimU or dimInt > min(dimV, dimW):
        raise InconsistentDims("inconsistent subspace dimensions", dims=list(dims))
    if dimV + dimW - dimInt > dimU:
        raise InconsistentDims("V + W would exceed U", dims=list(dims))
    return TransversalityDefect(dimU, dimV, dimW, dimInt)


def real_pair_defect(dim_real_X: int, dim_real_Y: int) -> TransversalityDefect:
    """Defect of ``T(RX)`` against ``T(CY)`` inside ``T(CX)`` at a real point of Y."""
    if dim_real_Y > dim_real_X:
        raise InconsistentDims("Y must not be larger than X", dims=[dim_real_X, dim_real_Y])
    return transversality_defect(2 * dim_real_X, dim_real_X, 2 * dim_real_Y, dim_real_Y)


# ---------------------------------------------------------------------------
# floating point subdivision oracle (tests only)


@dataclass(frozen=True)
class OracleCluster:
    chart: ChartId
    box: tuple[tuple[float, float], tuple[float, float]]
    point: tuple[float, float, float]  # unit vector in R^3
    leaf: float


def _numpy_eval(p: HomPoly, chart: ChartId, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    coords = chart.lift(a, b)
    out = np.zeros_like(a, dtype=float)
    for (e0, e1, e2), c in p.terms:
        out = out + float(c.re) * (coords[0] ** e0) * (coords[1] ** e1) * (coords[2] ** e2)
    return out


def _flag(R, S, chart, x0, y0, w):
    xs = [x0, x0 + w, x0, x0 + w]
    ys = [y0, y0, y0 + w, y0 + w]
    fr = np.stack([_numpy_eval(R, chart, np.asarray(a, float), np.asarray(b, float)) for a, b in zip(xs, ys)])
    fs = np.stack([_numpy_eval(S, chart, np.asarray(a, float), np.asarray(b, float)) for a, b in zip(xs, ys)])
    return (fr.min(0) <= 0) & (fr.max(0) >= 0) & (fs.min(0) <= 0) & (fs.max(0) >= 0)


def brute_force_base_oracle(R: HomPoly, S: HomPoly, resolution: int = 64, levels: int = 10) -> list[OracleCluster]:
    """Sign-change subdivision over the three charts ``[-1, 1]^2``.

    Cells where both R and S change sign at the corners are refined ``levels``
    times; surviving leaves are clustered and clusters are merged across charts.
    """
    if resolution < 8:
        raise MalformedInput("resolution must be at least 8", module="solve")
    clusters: list[OracleCluster] = []
    for chart in CHART_ORDER:
        w = 2.0 / resolution
        gx, gy = np.meshgrid(np.arange(resolution), np.arange(resolution), indexing="ij")
        x0, y0 = -1 + gx.ravel() * w, -1 + gy.ravel() * w
        keep = _flag(R, S, chart, x0, y0, w)
        x0, y0 = x0[keep], y0[keep]
        for _ in range(levels):
            w /= 2
            x0 = np.concatenate([x0, x0 + w, x0, x0 + w])
            y0 = np.concatenate([y0, y0, y0 + w, y0 + w])
            keep = _flag(R, S, chart, x0, y0, w)
            x0, y0 = x0[keep], y0[keep]
            if len(x0) > 200000:
                raise InvariantBreach("oracle subdivision exploded", module="solve")
        # connected components with a slack of two leaf widths
        n = len(x0)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        order = np.lexsort((y0, x0))
        for a_idx in range(n):
            ia = order[a_idx]
            for b_idx in range(a_idx + 1, n):
                ib = order[b_idx]
                if x0[ib] - x0[ia] > 3 * w:
                    break
                if abs(y0[ib] - y0[ia]) <= 3 * w:
                    parent[find(ia)] = find(ib)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        for members in groups.values():
            xs, ys = x0[members], y0[members]
            box = ((float(xs.min()), float(xs.max() + w)), (float(ys.min()), float(ys.max() + w)))
            # near misses of the two curves pass the corner test but have winding number 0
            if _winding(R, S, chart, box, 2 * w) == 0:
                continue
            cx, cy = (box[0][0] + box[0][1]) / 2, (box[1][0] + box[1][1]) / 2
            v = np.array(chart.lift(cx, cy), dtype=float)
            clusters.append(OracleCluster(chart, box, tuple(v / np.linalg.norm(v)), w))
    # merge clusters seen from several charts
    merged: list[OracleCluster] = []
    for c in clusters:
        tol = 8 * max(c.leaf, max(m.leaf for m in merged) if merged else 0)
        if any(_proj_dist(c.point, m.point) < tol for m in merged):
            continue
        merged.append(c)
    return merged


def _winding(R: HomPoly, S: HomPoly, chart: ChartId, box, pad: float, samples: int = 256) -> int:
    """Winding number of ``(R, S)`` around the padded box, from dense float samples."""
    (x0, x1), (y0, y1) = box
    x0, x1, y0, y1 = x0 - pad, x1 + pad, y0 - pad, y1 + pad
    s = np.linspace(0.0, 1.0, samples, endpoint=False)
    xs = np.concatenate([x0 + (x1 - x0) * s, np.full(samples, x1), x1 - (x1 - x0) * s, np.full(samples, x0)])
    ys = np.concatenate([np.full(samples, y0), y0 + (y1 - y0) * s, np.full(samples, y1), y1 - (y1 - y0) * s])
    angles = np.arctan2(_numpy_eval(S, chart, xs, ys), _numpy_eval(R, chart, xs, ys))
    steps = np.diff(np.concatenate([angles, angles[:1]]))
    steps = (steps + np.pi) % (2 * np.pi) - np.pi
    return int(round(steps.sum() / (2 * np.pi)))


def _proj_dist(p, q) -> float:
    p, q = np.asarray(p), np.asarray(q)
    return float(min(np.linalg.norm(p - q), np.linalg.norm(p + q)))
