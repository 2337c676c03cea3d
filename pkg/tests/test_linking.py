from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import small_rationals
from realslice.errors import LineMeetsBase, RealRoot, RootAtInfinity
from realslice.generate import gen_instance
from realslice.linking import (
    OrientedLine,
    crossing_signs,
    h_circle_v,
    halfplane_root_count,
    lk_boundary,
    lk_chart,
    verify_theorem5,
)
from realslice.poly import BinaryForm, GaussianRational, parse_poly
from realslice.slices import certify_slice, conjugate_flip

G = GaussianRational
I = G(0, 1)
LINE_AT_INFINITY = OrientedLine((1, 0, 0), (0, 1, 0))


def _form(*coeffs):
    """Binary form from ascending coefficients of ``q(t)``."""
    return BinaryForm(len(coeffs) - 1, coeffs)


def _counts(p):
    c = halfplane_root_count(p)
    return c.upper, c.lower


# half-plane counting -------------------------------------------------------------


def test_halfplane_examples():
    assert _counts(_form(-I, 1)) == (1, 0)
    assert _counts(_form(1, 0, 1)) == (1, 1)
    assert _counts(_form(1, I, 1)) == (1, 1)
    with pytest.raises(RealRoot):
        halfplane_root_count(_form(-1, 0, 1))
    with pytest.raises(RootAtInfinity):
        halfplane_root_count(_form(1, 0))


def test_halfplane_multiple_roots():
    # (t - i)^2 (t + 2i) = (t^2 - 2it - 1)(t + 2i)
    p = _form(-2 * I, 3, 0, 1)
    assert _counts(p) == (2, 1)
    # real double root hidden in a complex form
    with pytest.raises(RealRoot):
        halfplane_root_count(_form(1 * I, -2 * I, 1 * I))


nonreal_roots = st.builds(G, small_rationals, small_rationals.filter(lambda v: v != 0))
gaussian_units = st.builds(G, small_rationals, small_rationals).filter(lambda c: not c.is_zero())


@given(st.lists(nonreal_roots, min_size=1, max_size=6), gaussian_units)
def test_halfplane_against_root_oracle(roots, lead):
    coeffs = [lead]
    for r in roots:
        # multiply by (t - r)
        shifted = [G(0)] + coeffs
        scaled = [c * r for c in coeffs] + [G(0)]
        coeffs = [a - b for a, b in zip(shifted, scaled)]
    upper = sum(1 for r in roots if r.im > 0)
    assert _counts(_form(*coeffs)) == (upper, len(roots) - upper)


# H o V -------------------------------------------------------------------------------


def test_h_circle_v_examples():
    lines = certify_slice(parse_poly("x"), parse_poly("y"))
    assert h_circle_v(LINE_AT_INFINITY, lines) == 0
    conic = certify_slice(parse_poly("x^2+y^2-z^2"), parse_poly("x*y"))
    assert h_circle_v(LINE_AT_INFINITY, conic) == 1
    assert h_circle_v(LINE_AT_INFINITY, conjugate_flip(lines)) == 1


def test_line_through_base_point():
    base = certify_slice(parse_poly("x"), parse_poly("y"))
    through = OrientedLine((0, 0, 1), (1, 1, 0))
    for fn in (h_circle_v, lk_chart, lk_boundary):
        with pytest.raises(LineMeetsBase):
            fn(through, base)


# lk ------------------------------------------------------------------------------------


def test_calibration_instance():
    base = certify_slice(parse_poly("x"), parse_poly("y"))
    assert lk_chart(LINE_AT_INFINITY, base) == Fraction(1, 2)
    assert lk_boundary(LINE_AT_INFINITY, base) == Fraction(1, 2)
    rep = verify_theorem5(LINE_AT_INFINITY, base)
    assert (rep.h_dot_v, rep.lk_chart, rep.residual) == (0, Fraction(1, 2), 0)


def test_conic_instance():
    base = certify_slice(parse_poly("x^2+y^2-z^2"), parse_poly("x*y"))
    assert lk_chart(LINE_AT_INFINITY, base) == 0
    assert lk_boundary(LINE_AT_INFINITY, base) == 0
    rep = verify_theorem5(LINE_AT_INFINITY, base)
    assert (rep.h_dot_v, rep.D, rep.residual) == (1, 2, 0)


def test_conjugate_negates_lk():
    base = certify_slice(parse_poly("x"), parse_poly("y"))
    assert lk_chart(LINE_AT_INFINITY, conjugate_flip(base)) == Fraction(-1, 2)
    assert lk_boundary(LINE_AT_INFINITY, conjugate_flip(base)) == Fraction(-1, 2)


def test_boundary_independent_of_auxiliary_choices():
    inst = gen_instance(3)
    values = {lk_boundary(inst.line, inst.base, seed=s, outgoing=o) for s in range(6) for o in (1, -1)}
    assert values == {lk_chart(inst.line, inst.base)}


def test_crossing_signs_independent_of_outgoing_direction():
    inst = gen_instance(5)
    for s in range(4):
        assert crossing_signs(inst.line, inst.base, s, 1) == crossing_signs(inst.line, inst.base, s, -1)


# identity and symmetries on random instances --------------------------------------------------


@pytest.mark.parametrize("seed", range(1000, 1025))
def test_random_instance_identity(seed):
    inst = gen_instance(seed)
    rep = verify_theorem5(inst.line, inst.base, seed=seed)
    D = inst.base.degree
    assert rep.residual == 0
    assert rep.lk_chart == rep.lk_boundary
    assert abs(rep.lk_chart) <= Fraction(D, 2)
    assert (2 * rep.lk_chart).denominator == 1
    assert (rep.lk_chart.denominator == 1) == (D % 2 == 0)


@pytest.mark.parametrize("seed", range(1100, 1115))
def test_reversal_antisymmetry(seed):
    inst = gen_instance(seed)
    fwd = verify_theorem5(inst.line, inst.base, seed=seed)
    back = verify_theorem5(inst.line.reversed(), inst.base, seed=seed)
    assert back.lk_chart == -fwd.lk_chart and back.lk_boundary == -fwd.lk_boundary
    assert back.h_dot_v == inst.base.degree - fwd.h_dot_v
    assert back.residual == 0


@pytest.mark.parametrize("seed", range(1200, 1215))
def test_conjugation_consistency(seed):
    inst = gen_instance(seed)
    fwd = verify_theorem5(inst.line, inst.base, seed=seed)
    conj = verify_theorem5(inst.line, conjugate_flip(inst.base), seed=seed)
    assert conj.h_dot_v == inst.base.degree - fwd.h_dot_v
    assert conj.lk_chart == -fwd.lk_chart
    assert conj.residual == 0


def test_report_serializes():
    inst = gen_instance(0)
    d = verify_theorem5(inst.line, inst.base).to_dict()
    assert d["residual"] == "0" and d["D"] == inst.base.degree
