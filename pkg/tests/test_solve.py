import random
from fractions import Fraction

import pytest

from realslice.acceptance import _same_point_sets, match_oracle, random_pencil
from realslice.errors import CommonFactor, DegreeMismatch, Degenerate, InconsistentDims, SingularOrTangent
from realslice.poly import HomPoly, parse_poly
from realslice.solve import (
    ChartId,
    brute_force_base_oracle,
    jacobian_certificate,
    real_base_points,
    real_pair_defect,
    refine_point,
    transversality_defect,
)

CIRCLE = parse_poly("x^2+y^2-z^2")
XY = parse_poly("x*y")


def _find(points, hom):
    """The certified point whose homogeneous box contains ``hom``, up to scaling."""
    hits = []
    for p in points:
        k = p.chart.index
        if hom[k] == 0:
            continue
        i, j = p.chart.axes
        if p.contains(Fraction(hom[i], hom[k]), Fraction(hom[j], hom[k])) and p.chart == _owner(hom):
            hits.append(p)
    assert len(hits) == 1, f"{hom} matched {len(hits)} points"
    return hits[0]


def _owner(hom):
    for chart in (ChartId.Z, ChartId.Y, ChartId.X):
        if hom[chart.index] != 0:
            return chart


def test_circle_and_cross():
    pts = real_base_points(CIRCLE, XY)
    assert len(pts) == 4
    for hom in [(0, 1, 1), (0, 1, -1), (1, 0, 1), (1, 0, -1)]:
        _find(pts, hom)


def test_two_lines():
    (p,) = real_base_points(parse_poly("x"), parse_poly("y"))
    assert p.chart == ChartId.Z and p.contains(0, 0)


def test_common_factor():
    with pytest.raises(CommonFactor) as info:
        real_base_points(parse_poly("x^2"), XY)
    assert "x" in str(info.value.to_dict())


def test_empty_real_base():
    assert real_base_points(CIRCLE, parse_poly("x^2+y^2-2z^2")) == []


def test_points_on_line_at_infinity():
    # (1:0:0) and (0:1:0) and (1:1:0) lie on z = 0
    pts = real_base_points(parse_poly("x*y*(x-y) + z^3"), parse_poly("z*(x^2+y^2+z^2)"))
    charts = sorted(p.chart.value for p in pts)
    assert charts == ["x", "y", "y"]
    _find(pts, (1, 0, 0))
    _find(pts, (0, 1, 0))
    _find(pts, (1, 1, 0))


def test_degree_checks():
    with pytest.raises(DegreeMismatch):
        real_base_points(parse_poly("x"), parse_poly("y^2"))


def test_refine_contract():
    pts = real_base_points(CIRCLE, XY)
    for p in pts:
        q = refine_point(p, Fraction(1, 10**6))
        assert q.width <= Fraction(1, 10**6)
        assert all(o.lo <= n.lo and n.hi <= o.hi for o, n in zip(p.box, q.box))
        r = refine_point(q, Fraction(1, 10**7))
        assert all(o.lo <= n.lo and n.hi <= o.hi for o, n in zip(q.box, r.box))
        others = [o for o in pts if o is not p]
        assert not any(r.overlaps(o) for o in others)


def test_refinement_keeps_points_apart():
    pts = [refine_point(p, Fraction(1, 10**8)) for p in real_base_points(CIRCLE, XY)]
    for i, p in enumerate(pts):
        for q in pts[i + 1 :]:
            assert not p.overlaps(q)


def test_multiplicity_reported():
    pts = real_base_points(CIRCLE, parse_poly("(y-z)*x"))
    tangent = _find(pts, (0, 1, 1))
    assert tangent.multiplicity > 1


# Jacobian ----------------------------------------------------------------------


def test_jacobian_chart_y():
    p = _find(real_base_points(CIRCLE, XY), (0, 1, 1))
    # chart y = 1 has coordinates (x, z): [[2x, -2z], [1, 0]] at (0, 1) gives 2
    cert = jacobian_certificate(CIRCLE, XY, p, chart=ChartId.Y)
    assert cert.sign == 1 and cert.enclosure.contains(2)


def test_jacobian_tangent_point():
    R, S = CIRCLE, parse_poly("(y-z)*x")
    p = _find(real_base_points(R, S), (0, 1, 1))
    with pytest.raises(SingularOrTangent):
        jacobian_certificate(R, S, p, chart=ChartId.Y)


def test_jacobian_identity():
    R, S = parse_poly("x"), parse_poly("y")
    (p,) = real_base_points(R, S)
    cert = jacobian_certificate(R, S, p)
    assert cert.sign == 1 and cert.enclosure.contains(1)
    assert jacobian_certificate(S, R, p).sign == -1


# oracle ------------------------------------------------------------------------


def test_oracle_examples():
    assert len(brute_force_base_oracle(CIRCLE, XY, 64)) == 4
    (c,) = brute_force_base_oracle(parse_poly("x"), parse_poly("y"), 64)
    assert c.chart == ChartId.Z and abs(c.point[0]) < 1e-3 and abs(c.point[1]) < 1e-3
    assert brute_force_base_oracle(CIRCLE, parse_poly("x^2+y^2-2z^2"), 64) == []


@pytest.mark.parametrize("seed", range(300, 315))
def test_completeness_against_oracle(seed):
    R, S = random_pencil(seed)
    try:
        pts = real_base_points(R, S)
    except (CommonFactor, Degenerate):
        pytest.skip("degenerate draw")
    if any(p.multiplicity > 1 for p in pts):
        pytest.skip("non-generic draw")
    assert len(pts) <= R.degree**2
    ok, why = match_oracle(R, S, pts)
    assert ok, why


# invariance --------------------------------------------------------------------


@pytest.mark.parametrize("seed", range(400, 410))
def test_pencil_invariance(seed):
    R, S = random_pencil(seed, (1, 3))
    try:
        base = real_base_points(R, S)
    except (CommonFactor, Degenerate):
        pytest.skip("degenerate draw")
    rng = random.Random(seed)
    q = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    width = Fraction(1, 10**8)
    assert _same_point_sets(base, real_base_points(S, R), width)
    assert _same_point_sets(base, real_base_points(R, S + R.scale(q)), width)


@pytest.mark.parametrize("seed", range(500, 510))
def test_elimination_order_independence(seed):
    R, S = random_pencil(seed, (1, 3))
    try:
        a = real_base_points(R, S, eliminate="y")
    except (CommonFactor, Degenerate):
        pytest.skip("degenerate draw")
    b = real_base_points(R, S, eliminate="x")
    assert _same_point_sets(a, b, Fraction(1, 10**8))


# dimension bookkeeping ---------------------------------------------------------


def test_transversality_defect_examples():
    assert transversality_defect(4, 2, 2, 1).defect == 1
    assert transversality_defect(4, 2, 2, 0).transverse
    assert real_pair_defect(2, 0).defect == 2
    with pytest.raises(InconsistentDims):
        transversality_defect(4, 5, 1, 0)
    with pytest.raises(InconsistentDims):
        transversality_defect(2, 2, 2, 0)


def test_real_pair_defect_formula():
    for x in range(5):
        for y in range(x + 1):
            assert real_pair_defect(x, y).defect == x - y


def test_zero_form_rejected():
    with pytest.raises(Degenerate):
        real_base_points(HomPoly.zero(2), XY)
