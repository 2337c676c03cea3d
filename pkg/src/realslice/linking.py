"""Cap-linking of an oriented real line with a cooriented base on RP^2.

A line is given by two rational points ``u, v`` and is traversed as
``l(t) = t*u + v`` with ``t`` increasing, so the restriction ``P(t0*u + t1*v)``
is read as a polynomial in ``t = t0/t1``.  ``H`` is the half ``Im t > 0`` of
the complexified line.

Two routes compute the linking number:

* ``lk_chart`` compares every point's coorientation with the orientation of
  the affine chart ``RP^2 - A`` and sums the signs;
* ``lk_boundary`` runs, for every point ``q``, an auxiliary line through ``q``
  with its coorientation carried continuously from the germ at ``q`` to the
  crossing with ``A``, and sums the crossing signs.

Both are exact.  Geometric signs at irrational base points come from rational
interval enclosures that are refined until they exclude zero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateAuxiliary, InvariantBreach, LineMeetsBase, MalformedInput, RealRoot, RootAtInfinity
from .interval import Interval, det3, dot
from .poly import BinaryForm, as_fraction, cross, restrict_to_line
from .slices import CoorientationFrame, CoorientedBase, PencilSpec
from .solve import _bisect_point, chart_box

# Chart calibration: the one sign left open by the conventions, fixed so the
# single-point base {x = y = 0} against the line z = 0 (from (1:0:0) towards
# (0:1:0)) gets lk = +1/2.
SIGMA_CHART = 1
SIGMA_BOUNDARY = 1

_MAX_REFINE = 200


@dataclass(frozen=True)
class OrientedLine:
    u: tuple[Fraction, Fraction, Fraction]
    v: tuple[Fraction, Fraction, Fraction]

    def __init__(self, u: Sequence, v: Sequence):
        u = tuple(as_fraction(c) for c in u)
        v = tuple(as_fraction(c) for c in v)
        if len(u) != 3 or len(v) != 3:
            raise MalformedInput("line points need three homogeneous coordinates", module="linking")
        if all(c == 0 for c in cross(u, v)):
            raise MalformedInput("u and v must be projectively independent", module="linking")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def normal(self) -> tuple[Fraction, Fraction, Fraction]:
        """``u x v``: the line is ``{p : p . normal = 0}``."""
        return cross(self.u, self.v)

    def reversed(self) -> "OrientedLine":
        return OrientedLine(tuple(-c for c in self.u), self.v)

    def point(self, t) -> tuple[Fraction, Fraction, Fraction]:
        t = as_fraction(t)
        return tuple(t * a + b for a, b in zip(self.u, self.v))

    def to_dict(self) -> dict:
        return {"u": [str(c) for c in self.u], "v": [str(c) for c in self.v]}


@dataclass(frozen=True)
class HalfPlaneCount:
    upper: int
    lower: int
    degree: int


@dataclass(frozen=True)
class LinkingReport:
    line: OrientedLine
    base: CoorientedBase
    lk_chart: Fraction
    lk_boundary: Fraction
    h_dot_v: int
    D: int
    residual: Fraction
    chart_signs: tuple[int, ...] = ()
    crossing_signs: tuple[int, ...] = ()
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "line": self.line.to_dict(),
            "D": self.D,
            "h_dot_v": self.h_dot_v,
            "lk_chart": str(self.lk_chart),
            "lk_boundary": str(self.lk_boundary),
            "residual": str(self.residual),
            "chart_signs": list(self.chart_signs),
            "crossing_signs": list(self.crossing_signs),
            "seed": self.seed,
        }


# ---------------------------------------------------------------------------
# real polynomial arithmetic for Sturm sequences (ascending Fraction lists)


def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for k, c in enumerate(b):
            a[shift + k] -= f * c
        a.pop()
        _trim(a)
    return a


def _sturm_chain(a: list[Fraction], b: list[Fraction]) -> list[list[Fraction]]:
    chain = [a, b]
    while chain[-1]:
        r = _rem(chain[-2], chain[-1])
        chain.append([-c for c in r])
    chain.pop()
    return chain


def _variations(signs: list[int]) -> int:
    signs = [s for s in signs if s]
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def _sign_at_infinity(p: list[Fraction], direction: int) -> int:
    lead = p[-1]
    s = (lead > 0) - (lead < 0)
    return s if direction > 0 or (len(p) - 1) % 2 == 0 else -s


def _cauchy_index(num: list[Fraction], den: list[Fraction]) -> int:
    """Cauchy index of ``num/den`` over the whole real line."""
    if not num:
        return 0
    chain = _sturm_chain(den, num)
    return _variations([_sign_at_infinity(p, -1) for p in chain]) - _variations(
        [_sign_at_infinity(p, 1) for p in chain]
    )


def _distinct_real_roots(p: list[Fraction]) -> int:
    if len(p) <= 1:
        return 0
    deriv = [k * c for k, c in enumerate(p)][1:]
    return _cauchy_index(deriv, p)


def halfplane_root_count(p: BinaryForm) -> HalfPlaneCount:
    """Roots of ``q(t) = p(t, 1)`` in ``Im t > 0`` and ``Im t < 0``, with multiplicity."""
    n = p.degree
    if p.is_zero():
        raise MalformedInput("the zero form has no root count", module="linking")
    lead = p.coeffs[n]
    if lead.is_zero():
        raise RootAtInfinity("p(1, 0) = 0: the form has a root at t = infinity", module="linking", form=str(p))
    monic = [c / lead for c in p.coeffs]
    A = _trim([c.re for c in monic])
    B = _trim([c.im for c in monic])
    # real roots of q are the real common roots of A and B
    chain = _sturm_chain(A, B) if B else [A]
    g = chain[-1]
    if _distinct_real_roots(g) > 0:
        raise RealRoot("the restricted form has a real root", module="linking", form=str(p))
    diff = -_cauchy_index(B, A)  # upper minus lower
    if (n + diff) % 2:
        raise InvariantBreach("half-plane counts have the wrong parity", module="linking")
    upper = (n + diff) // 2
    return HalfPlaneCount(upper, n - upper, n)


# ---------------------------------------------------------------------------


def restricted_form(line: OrientedLine, pencil: PencilSpec) -> BinaryForm:
    return restrict_to_line(pencil.P, line.u, line.v)


def line_meets_base(line: OrientedLine, pencil: PencilSpec) -> bool:
    """Whether some real point of the line is a base point (exact)."""
    p = restricted_form(line, pencil)
    try:
        halfplane_root_count(p)
    except (RealRoot, RootAtInfinity):
        return True
    return False


def h_circle_v(line: OrientedLine, base: CoorientedBase) -> int:
    p = restricted_form(line, base.pencil)
    try:
        return halfplane_root_count(p).upper
    except (RealRoot, RootAtInfinity) as exc:
        raise LineMeetsBase("the line passes through a real base point", line=line.to_dict()) from exc


def _require_disjoint(line: OrientedLine, base: CoorientedBase):
    if line_meets_base(line, base.pencil):
        raise LineMeetsBase("the line passes through a real base point", line=line.to_dict())


def _certified_sign(frame: CoorientationFrame, fn) -> int:
    """Sign of ``fn(lift box)``, refining the point until it is certain."""
    p = frame.point
    for _ in range(_MAX_REFINE):
        p, box = chart_box(p, frame.chart)
        s = fn(frame.chart.lift(*box)).sign()
        if s:
            return s
        p = _bisect_point(p)
    raise InvariantBreach("geometric sign could not be certified", module="linking", point=frame.point.to_dict())


def chart_signs(line: OrientedLine, base: CoorientedBase) -> list[int]:
    """Per-point signs against the chart ``RP^2 - A`` oriented by ``(u, v)``."""
    _require_disjoint(line, base)
    omega = line.normal
    out = []
    for frame in base.points:
        # the lift with chart coordinate 1 sits on the side q . omega of the plane of A
        side = _certified_sign(frame, lambda q: dot(q, omega))
        transition = frame.chart.orientation * side
        out.append(SIGMA_CHART * frame.det_sign * transition)
    return out


def lk_chart(line: OrientedLine, base: CoorientedBase) -> Fraction:
    return Fraction(sum(chart_signs(line, base)), 2)


def _random_point(rng: random.Random) -> tuple[Fraction, Fraction, Fraction]:
    while True:
        r = tuple(Fraction(rng.randint(-12, 12), rng.randint(1, 5)) for _ in range(3))
        if any(r):
            return r


class _BoxCache:
    """Lift boxes of all base points, refined on demand and kept between queries."""

    def __init__(self, base: CoorientedBase):
        self.frames = base.points
        self.points = [f.point for f in base.points]
        self.lifts = [None] * len(self.points)
        self.width: Fraction | None = None

    def get(self, width: Fraction):
        if self.width is not None and self.width <= width:
            return self.lifts
        for k, frame in enumerate(self.frames):
            p = self.points[k]
            while True:
                p, box = chart_box(p, frame.chart)
                if max(b.width for b in box) <= width:
                    break
                p = _bisect_point(p)
            self.points[k] = p
            self.lifts[k] = frame.chart.lift(*box)
        self.width = width
        return self.lifts


def _crossing_sign(frame: CoorientationFrame, q: Sequence[Interval], r, omega, outgoing: int) -> int:
    """Signed crossing of A with the auxiliary line through q and r; 0 if undecided."""
    m = cross(q, r)
    # seed: (N, outgoing tangent) must match the coorientation at q
    tangent = tuple(outgoing * c for c in r)
    seed = (frame.det_sign * frame.chart.orientation * det3(q, m, tangent)).sign()
    if seed == 0:
        return 0
    N = tuple(seed * c for c in m)
    if outgoing < 0:
        # the section alpha*q + r leaves q through the lift -q, where normals change sign
        N = tuple(-c for c in N)
    # crossing point of alpha*q + r with the plane of A, and A's tangent there
    qw = dot(q, omega)
    if qw.sign() == 0:
        return 0
    alpha = -dot(r, omega) / qw
    psi = tuple(alpha * a + b for a, b in zip(q, r))
    X = cross(psi, omega)
    s = (dot(X, m) * dot(N, m)).sign()
    return s


def crossing_signs(line: OrientedLine, base: CoorientedBase, seed: int = 0, outgoing: int = 1) -> list[int]:
    """Per-point crossing signs of ``A`` with seeded auxiliary lines."""
    if outgoing not in (1, -1):
        raise MalformedInput("outgoing must be +1 or -1", module="linking")
    _require_disjoint(line, base)
    omega = line.normal
    rng = random.Random(seed)
    cache = _BoxCache(base)
    signs = []
    for idx, frame in enumerate(base.points):
        for _attempt in range(50):
            r = _random_point(rng)
            result = _try_auxiliary(cache, idx, r, omega, outgoing)
            if result:
                signs.append(SIGMA_BOUNDARY * result)
                break
        else:
            raise DegenerateAuxiliary("no admissible auxiliary line found", point=frame.point.to_dict(), seed=seed)
    return signs


def _try_auxiliary(cache: _BoxCache, idx: int, r, omega, outgoing: int) -> int:
    """Crossing sign for auxiliary point r, or 0 if r is rejected."""
    width = Fraction(1, 2**6)
    for _ in range(10):
        boxes = cache.get(width)
        q = boxes[idx]
        independent = any(c.sign() for c in cross(q, r))
        others_clear = all(det3(q, r, boxes[j]).sign() for j in range(len(boxes)) if j != idx)
        if independent and others_clear:
            s = _crossing_sign(cache.frames[idx], q, r, omega, outgoing)
            if s:
                return s
        width /= 2**4
    return 0


def lk_boundary(line: OrientedLine, base: CoorientedBase, seed: int = 0, outgoing: int = 1) -> Fraction:
    return Fraction(sum(crossing_signs(line, base, seed, outgoing)), 2)


def verify_theorem5(line: OrientedLine, base: CoorientedBase, seed: int = 0) -> LinkingReport:
    """Both linking numbers, H o V and the residual ``D/2 - H o V - lk``."""
    D = base.degree
    hv = h_circle_v(line, base)
    eps = chart_signs(line, base)
    iota = crossing_signs(line, base, seed)
    lkc, lkb = Fraction(sum(eps), 2), Fraction(sum(iota), 2)
    if lkc != lkb:
        raise InvariantBreach("the two linking computations disagree", module="linking", lk_chart=str(lkc), lk_boundary=str(lkb))
    if abs(lkc) > Fraction(D, 2):
        raise InvariantBreach("|lk| exceeds D/2", module="linking", lk=str(lkc), D=D)
    if not 0 <= hv <= D:
        raise InvariantBreach("H o V outside [0, D]", module="linking", h_dot_v=hv, D=D)
    residual = Fraction(D, 2) - hv - lkc
    return LinkingReport(line, base, lkc, lkb, hv, D, residual, tuple(eps), tuple(iota), seed)


__all__ = [
    "OrientedLine",
    "HalfPlaneCount",
    "LinkingReport",
    "halfplane_root_count",
    "h_circle_v",
    "lk_chart",
    "lk_boundary",
    "chart_signs",
    "crossing_signs",
    "verify_theorem5",
    "line_meets_base",
    "SIGMA_CHART",
    "SIGMA_BOUNDARY",
]
