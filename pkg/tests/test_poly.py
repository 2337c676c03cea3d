from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import gaussians, hom_polys, small_rationals
from realslice.errors import (
    BothZero,
    DegreeMismatch,
    DegreeZero,
    DependentPoints,
    IdenticallyZero,
    MalformedInput,
    NotHomogeneous,
    ZeroPolynomial,
)
from realslice.poly import (
    I,
    GaussianRational,
    HomPoly,
    complexify,
    evaluate,
    format_poly,
    gradient,
    parse_poly,
    pencil_member,
    realify,
    restrict_to_line,
    sum_of_squares,
)

G = GaussianRational


def test_parse_circle():
    p = parse_poly("x^2 + y^2 - z^2")
    assert p.degree == 2
    assert len(p.terms) == 3
    assert p.coeff((0, 0, 2)) == -1


def test_parse_rejects_mixed_degrees():
    with pytest.raises(NotHomogeneous):
        parse_poly("x^2 + y - z^2")


def test_parse_gaussian_coefficient():
    p = parse_poly("x^2 + i*x*y")
    assert p.degree == 2
    assert p.coeff((1, 1, 0)) == G(0, 1)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3/2 x y", {(1, 1, 0): G(Fraction(3, 2))}),
        ("(1/2+3/4*i) z^2", {(0, 0, 2): G(Fraction(1, 2), Fraction(3, 4))}),
        ("2/3*i*x", {(1, 0, 0): G(0, Fraction(2, 3))}),
        ("(x+y)^2", {(2, 0, 0): G(1), (1, 1, 0): G(2), (0, 2, 0): G(1)}),
        ("x*y - y*x + z^2", {(0, 0, 2): G(1)}),
        ("-x", {(1, 0, 0): G(-1)}),
    ],
)
def test_parse_grammar(text, expected):
    assert parse_poly(text).as_dict() == expected


@pytest.mark.parametrize("text", ["", "x +", "x^", "2 ** x", "x^y", "w", "(x", "x)", "x/y"])
def test_parse_malformed(text):
    with pytest.raises(MalformedInput):
        parse_poly(text)


def test_parse_zero_needs_degree():
    with pytest.raises(ZeroPolynomial):
        parse_poly("x - x")
    assert parse_poly("x - x", degree=1).is_zero()
    with pytest.raises(DegreeMismatch):
        parse_poly("x^2", degree=1)


@given(hom_polys())
def test_format_parse_round_trip(p):
    assert parse_poly(format_poly(p), degree=p.degree) == p


def test_evaluate_examples():
    circle = parse_poly("x^2+y^2-z^2")
    assert evaluate(circle, (0, 1, 1)) == 0
    assert evaluate(circle, (1, I, 0)) == 0
    assert evaluate(parse_poly("x*y"), (1, 0, 1)) == 0


def test_gradient_examples():
    assert gradient(parse_poly("x^2+y^2-z^2")) == (parse_poly("2x"), parse_poly("2y"), parse_poly("-2z"))
    gx, gy, gz = gradient(parse_poly("x*y"))
    assert (gx, gy) == (parse_poly("y"), parse_poly("x")) and gz.is_zero() and gz.degree == 1
    gx, gy, gz = gradient(parse_poly("x^3"))
    assert gx == parse_poly("3x^2") and gy.is_zero() and gz.is_zero()
    with pytest.raises(DegreeZero):
        gradient(HomPoly(0, {(0, 0, 0): 1}))


def test_gradient_matches_sympy():
    x, y, z = sympy.symbols("x y z")
    p = parse_poly("3x^3 - 2/5 x y z + 7 y^2 z - z^3")
    expr = 3 * x**3 - sympy.Rational(2, 5) * x * y * z + 7 * y**2 * z - z**3
    for var, d in zip((x, y, z), gradient(p)):
        assert sympy.expand(sympy.diff(expr, var) - sympy.sympify(format_poly(d).replace("^", "**"))) == 0


def test_pencil_member_examples():
    x, y = parse_poly("x"), parse_poly("y")
    assert pencil_member(x, y, 1, 0) == x
    assert pencil_member(x, y, 1, 1) == parse_poly("x+y")
    with pytest.raises(BothZero):
        pencil_member(x, y, 0, 0)
    with pytest.raises(DegreeMismatch):
        pencil_member(x, parse_poly("y^2"), 1, 1)


def test_complexify_examples():
    assert complexify(parse_poly("x"), parse_poly("y")) == parse_poly("x + i y")
    assert complexify(parse_poly("x^2+y^2-z^2"), parse_poly("x*y")) == parse_poly("x^2+y^2-z^2 + i x y")
    R = parse_poly("x^2")
    assert complexify(R, HomPoly.zero(2)) == R
    with pytest.raises(DegreeMismatch):
        complexify(parse_poly("x"), parse_poly("y^2"))


def test_realify_examples():
    assert realify(parse_poly("x + i y")) == (parse_poly("x"), parse_poly("y"))
    assert realify(parse_poly("(1+i) x^2")) == (parse_poly("x^2"), parse_poly("x^2"))
    R, S = realify(parse_poly("x^2"))
    assert R == parse_poly("x^2") and S.is_zero()


def test_sum_of_squares_examples():
    assert sum_of_squares(parse_poly("x"), parse_poly("y")) == parse_poly("x^2+y^2")
    R, S = parse_poly("x^2+y^2-z^2"), parse_poly("x*y")
    assert sum_of_squares(R, S) == parse_poly("(x^2+y^2-z^2)^2 + x^2 y^2")
    with pytest.raises(DegreeMismatch):
        sum_of_squares(parse_poly("x"), parse_poly("y^2"))


def test_restrict_to_line_examples():
    u, v = (1, 0, 0), (0, 1, 0)
    p = restrict_to_line(parse_poly("x^2+y^2-z^2 + i x y"), u, v)
    # coefficients indexed by the exponent of t0
    assert p.coeffs == (G(1), G(0, 1), G(1))
    assert restrict_to_line(parse_poly("x + i y"), u, v).coeffs == (G(0, 1), G(1))
    with pytest.raises(IdenticallyZero):
        restrict_to_line(parse_poly("z"), u, v)
    with pytest.raises(DependentPoints):
        restrict_to_line(parse_poly("z"), u, (2, 0, 0))


def test_gaussian_arithmetic():
    a, b = G(1, 2), G(Fraction(1, 3), -1)
    assert a * b == G(Fraction(1, 3) + 2, Fraction(2, 3) - 1)
    assert (a / b) * b == a
    assert a.conjugate().conjugate() == a
    assert a * a.conjugate() == G(a.norm())
    assert parse_poly(f"({G(0, -1)}) x").coeff((1, 0, 0)) == G(0, -1)


# properties ------------------------------------------------------------------


@given(hom_polys(), st.tuples(gaussians, gaussians, gaussians), small_rationals)
def test_homogeneity(p, pt, s):
    scaled = tuple(G(s) * c for c in pt)
    assert evaluate(p, scaled) == G(s) ** p.degree * evaluate(p, pt)


@given(hom_polys())
def test_euler_identity(p):
    if p.degree == 0:
        return
    x, y, z = (HomPoly.variable(v) for v in "xyz")
    gx, gy, gz = gradient(p)
    assert x * gx + y * gy + z * gz == p.scale(p.degree)


@given(hom_polys(real=True, degree=3), hom_polys(real=True, degree=3))
def test_realify_complexify_inverse(R, S):
    if R.is_zero() and S.is_zero():
        return
    assert realify(complexify(R, S)) == (R, S)


@given(hom_polys(degree=2))
def test_complexify_realify_inverse(P):
    R, S = realify(P)
    if R.is_zero() and S.is_zero():
        return
    assert complexify(R, S) == P


@given(hom_polys(real=True, degree=2), hom_polys(real=True, degree=2), st.tuples(small_rationals, small_rationals, small_rationals))
def test_sum_of_squares_evaluation(R, S, q):
    assert evaluate(sum_of_squares(R, S), q) == evaluate(R, q) ** 2 + evaluate(S, q) ** 2


@given(
    hom_polys(degree=3),
    st.tuples(small_rationals, small_rationals, small_rationals),
    st.tuples(small_rationals, small_rationals, small_rationals),
    st.lists(st.tuples(small_rationals, small_rationals), min_size=20, max_size=20),
)
def test_restriction_commutes_with_evaluation(P, u, v, params):
    try:
        p = restrict_to_line(P, u, v)
    except (DependentPoints, IdenticallyZero):
        return
    for t0, t1 in params:
        point = tuple(t0 * a + t1 * b for a, b in zip(u, v))
        assert p.evaluate(t0, t1) == evaluate(P, point)
