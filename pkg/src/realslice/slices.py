"""Certified slices and the coorientation of their real points.

A frame ``(v, w)`` of the normal plane at a base point is positive when
``det [[dR(v), dR(w)], [dS(v), dS(w)]] > 0``.  This is the complex
orientation ``(n, i n)`` of the normal line of ``V = {R + iS = 0}`` read
through ``dP = dR + i dS``.  Each point stores the sign of its chart's
coordinate frame; conjugating ``V`` negates every one of them.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .errors import MalformedInput, RealP
from .poly import HomPoly, complexify, parse_poly
from .solve import CertifiedBasePoint, ChartId, jacobian_certificate, real_base_points, refine_point


@dataclass(frozen=True)
class PencilSpec:
    R: HomPoly
    S: HomPoly

    def __post_init__(self):
        for p in (self.R, self.S):
            if not p.is_real():
                raise MalformedInput("pencil generators must be real", module="slice", poly=str(p))
        if self.R.degree != self.S.degree:
            raise MalformedInput("pencil generators must have equal degree", module="slice")

    @property
    def degree(self) -> int:
        return self.R.degree

    @property
    def P(self) -> HomPoly:
        return complexify(self.R, self.S)

    @classmethod
    def parse(cls, text: str) -> "PencilSpec":
        parts = text.split(";")
        if len(parts) != 2:
            raise MalformedInput("a pencil is written 'R; S'", module="poly", text=text)
        R = parse_poly(parts[0])
        S = parse_poly(parts[1], degree=R.degree)
        return cls(R, S)

    def to_dict(self) -> dict:
        return {"R": str(self.R), "S": str(self.S), "degree": self.degree}


@dataclass(frozen=True)
class CoorientationFrame:
    """Coorientation at one point, as the sign of a frame in chart coordinates."""

    point: CertifiedBasePoint
    chart: ChartId
    frame: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    det_sign: int

    def positive_frame(self):
        """A frame that is positively cooriented."""
        v, w = self.frame
        return (v, w) if self.det_sign > 0 else (w, v)

    def to_dict(self) -> dict:
        return {
            "point": self.point.to_dict(),
            "chart": str(self.chart),
            "frame": [[str(c) for c in vec] for vec in self.frame],
            "det_sign": self.det_sign,
        }


_COORDINATE_FRAME = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))


@dataclass(frozen=True)
class CoorientedBase:
    pencil: PencilSpec
    points: tuple[CoorientationFrame, ...]

    @property
    def degree(self) -> int:
        return self.pencil.degree

    def to_dict(self) -> dict:
        return {"pencil": self.pencil.to_dict(), "points": [f.to_dict() for f in self.points]}


def certify_slice(R: HomPoly, S: HomPoly) -> CoorientedBase:
    """Isolate the real base and certify a nonzero Jacobian at every point."""
    if R.is_zero() or S.is_zero():
        raise RealP("P = R + iS is a multiple of a real form; it cannot slice", R=str(R), S=str(S))
    pencil = PencilSpec(R, S)
    frames = []
    for p in real_base_points(R, S):
        cert = jacobian_certificate(R, S, p)
        frames.append(CoorientationFrame(cert.point, cert.chart, _COORDINATE_FRAME, cert.sign))
    return CoorientedBase(pencil, tuple(frames))


def _locate(base: CoorientedBase, p) -> CoorientationFrame:
    if isinstance(p, int):
        return base.points[p]
    for f in base.points:
        if f.point == p or (f.point.chart == p.chart and all(a.overlaps(b) for a, b in zip(f.point.box, p.box))):
            return f
    raise MalformedInput("point is not in this base", module="slice")


def coorientation_frame(base: CoorientedBase, p, chart: ChartId | None = None) -> CoorientationFrame:
    """The coorientation at ``p`` (an index or a point), optionally in another chart."""
    frame = _locate(base, p)
    if chart is None or chart == frame.chart:
        return frame
    cert = jacobian_certificate(base.pencil.R, base.pencil.S, frame.point, chart)
    return CoorientationFrame(cert.point, chart, _COORDINATE_FRAME, cert.sign)


def conjugate_flip(base: CoorientedBase) -> CoorientedBase:
    """The base cooriented by ``conj V = {R - iS = 0}``."""
    pencil = PencilSpec(base.pencil.R, -base.pencil.S)
    return CoorientedBase(pencil, tuple(replace(f, det_sign=-f.det_sign) for f in base.points))


def chart_sign(frame: CoorientationFrame, chart_orientation: int) -> int:
    """Coorientation sign measured against an oriented chart."""
    if chart_orientation not in (1, -1):
        raise MalformedInput("chart orientation must be +1 or -1", module="slice")
    return frame.det_sign * chart_orientation


def refine_base(base: CoorientedBase, width) -> CoorientedBase:
    """Same base with every box refined; the signs are exact and do not change."""
    return replace(base, points=tuple(replace(f, point=refine_point(f.point, width)) for f in base.points))

