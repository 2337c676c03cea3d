"""Static SVG pictures of a cooriented base in the chart ``z = 1``.

Curves are rasterized with marching squares on a float grid; this is the
only place where the package draws with floating point, and nothing drawn
here feeds back into a computation.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .errors import EmptyWindow, RealSliceError
from .linking import OrientedLine, chart_signs, lk_chart
from .poly import HomPoly
from .slices import CoorientedBase
from .solve import ChartId, refine_point

SIZE = 480
GRID = 160

# edges of a marching-squares cell, keyed by corner bitmask (bit k = corner k positive);
# corners 0..3 are (0,0), (1,0), (1,1), (0,1) and edges 0..3 are bottom, right, top, left
_SEGMENTS = {
    1: [(3, 0)], 2: [(0, 1)], 3: [(3, 1)], 4: [(1, 2)], 6: [(0, 2)], 7: [(3, 2)],
    8: [(2, 3)], 9: [(0, 2)], 11: [(1, 2)], 12: [(1, 3)], 13: [(0, 1)], 14: [(3, 0)],
}


def _grid_values(p: HomPoly, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    out = np.zeros_like(X)
    for (a, b, _c), coeff in p.terms:
        out += float(coeff.re) * X**a * Y**b
    return out


def _edge_point(edge, i, j, f, xs, ys):
    corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)]
    a, b = [(0, 1), (1, 2), (3, 2), (0, 3)][edge]
    (ia, ja), (ib, jb) = corners[a], corners[b]
    fa, fb = f[ia, ja], f[ib, jb]
    t = 0.5 if fa == fb else fa / (fa - fb)
    return xs[ia] + t * (xs[ib] - xs[ia]), ys[ja] + t * (ys[jb] - ys[ja])


def marching_squares(f: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> list[tuple[tuple[float, float], tuple[float, float]]]:
    """Line segments approximating ``{f = 0}`` on a rectilinear grid."""
    pos = f > 0
    segments = []
    for i in range(len(xs) - 1):
        for j in range(len(ys) - 1):
            mask = int(pos[i, j]) | int(pos[i + 1, j]) << 1 | int(pos[i + 1, j + 1]) << 2 | int(pos[i, j + 1]) << 3
            if mask in (0, 15):
                continue
            if mask in (5, 10):
                # saddle: decide by the value at the centre
                centre = f[i : i + 2, j : j + 2].mean() > 0
                pairs = [(3, 0), (1, 2)] if (mask == 5) != centre else [(0, 1), (2, 3)]
            else:
                pairs = _SEGMENTS[mask]
            for e1, e2 in pairs:
                segments.append((_edge_point(e1, i, j, f, xs, ys), _edge_point(e2, i, j, f, xs, ys)))
    return segments


def _clip(p0, d, window):
    """Liang-Barsky clip of the line ``p0 + s*d`` to the window; None if it misses."""
    xmin, xmax, ymin, ymax = window
    lo, hi = -np.inf, np.inf
    for p, q, a, b in ((p0[0], d[0], xmin, xmax), (p0[1], d[1], ymin, ymax)):
        if q == 0:
            if not a <= p <= b:
                return None
            continue
        s1, s2 = (a - p) / q, (b - p) / q
        lo, hi = max(lo, min(s1, s2)), min(hi, max(s1, s2))
    if lo >= hi:
        return None
    return (p0[0] + lo * d[0], p0[1] + lo * d[1]), (p0[0] + hi * d[0], p0[1] + hi * d[1])


def _fmt(v: float) -> str:
    return f"{v:.3f}"


def emit_svg(base: CoorientedBase, line: OrientedLine | None = None, window: Sequence = (-2, 2, -2, 2)) -> str:
    """SVG text for ``base`` (and optionally ``line``) in the window ``(xmin, xmax, ymin, ymax)``."""
    xmin, xmax, ymin, ymax = (float(Fraction(str(v))) if not isinstance(v, float) else v for v in window)
    if not (xmin < xmax and ymin < ymax):
        raise EmptyWindow("plot window has no area", window=[str(v) for v in window])
    win = (xmin, xmax, ymin, ymax)

    def px(x, y):
        return (x - xmin) / (xmax - xmin) * SIZE, (ymax - y) / (ymax - ymin) * SIZE

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE + 60}" viewBox="0 0 {SIZE} {SIZE + 60}">',
        "<defs><marker id=\"head\" markerWidth=\"8\" markerHeight=\"8\" refX=\"6\" refY=\"3\" orient=\"auto\">"
        "<path d=\"M0,0 L6,3 L0,6 z\" fill=\"black\"/></marker></defs>",
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white" stroke="black"/>',
    ]
    xs, ys = np.linspace(xmin, xmax, GRID + 1), np.linspace(ymin, ymax, GRID + 1)
    for poly, colour in ((base.pencil.R, "#1f77b4"), (base.pencil.S, "#d62728")):
        segs = marching_squares(_grid_values(poly, xs, ys), xs, ys)
        path = " ".join(
            f"M{_fmt(px(*a)[0])},{_fmt(px(*a)[1])} L{_fmt(px(*b)[0])},{_fmt(px(*b)[1])}" for a, b in segs
        )
        if path:
            out.append(f'<path d="{path}" stroke="{colour}" stroke-width="1.2" fill="none"/>')

    eps: list[int | None] = [None] * len(base.points)
    legend = []
    if line is not None:
        try:
            eps = list(chart_signs(line, base))
            legend.append(f"lk = {lk_chart(line, base)}")
        except RealSliceError as exc:
            legend.append(f"lk unavailable: {type(exc).__name__}")
        u, v = np.array([float(c) for c in line.u]), np.array([float(c) for c in line.v])
        normal = np.cross(u, v)
        if normal[0] == 0 and normal[1] == 0:
            legend.append("line is z = 0 (at infinity in this chart)")
        else:
            # a point of the line in the chart and the direction of increasing t
            t0 = 0.0 if v[2] != 0 else 1.0
            p = t0 * u + v
            if p[2] == 0:
                t0, p = -1.0, -u + v
            affine = p[:2] / p[2]
            d = (u[:2] * p[2] - p[:2] * u[2]) / p[2] ** 2
            seg = _clip(affine, d, win)
            if seg is not None:
                (ax, ay), (bx, by) = px(*seg[0]), px(*seg[1])
                out.append(
                    f'<line x1="{_fmt(ax)}" y1="{_fmt(ay)}" x2="{_fmt(bx)}" y2="{_fmt(by)}" '
                    'stroke="black" stroke-width="1.5" marker-end="url(#head)"/>'
                )

    shown = 0
    for frame, e in zip(base.points, eps):
        if frame.point.chart != ChartId.Z:
            continue
        q = refine_point(frame.point, Fraction(1, 10**6))
        x, y = float(q.box[0].mid), float(q.box[1].mid)
        if not (xmin <= x <= xmax and ymin <= y <= ymax):
            continue
        shown += 1
        cx, cy = px(x, y)
        out.append(f'<circle cx="{_fmt(cx)}" cy="{_fmt(cy)}" r="4" fill="black"/>')
        # counterclockwise arc for a positive frame in the chart (screen y points down)
        r = 11
        sweep = 0 if frame.det_sign > 0 else 1
        out.append(
            f'<path d="M{_fmt(cx + r)},{_fmt(cy)} A{r},{r} 0 1 {sweep} {_fmt(cx)},{_fmt(cy + (r if sweep == 0 else -r))}" '
            'stroke="#2ca02c" stroke-width="1.2" fill="none" marker-end="url(#head)"/>'
        )
        if e is not None:
            out.append(f'<text x="{_fmt(cx + 13)}" y="{_fmt(cy - 13)}" font-size="11">{"+" if e > 0 else "-"}</text>')
    if shown == 0:
        legend.append("warning: no base points in this window")
    legend.insert(0, f"D = {base.degree}, {len(base.points)} real base points")
    for k, text in enumerate(legend):
        out.append(f'<text x="6" y="{SIZE + 16 + 14 * k}" font-size="12">{escape(text)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
