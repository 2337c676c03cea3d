from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import small_rationals
from realslice.interval import Interval, det3, eval_real_form, horner
from realslice.poly import evaluate, parse_poly


@st.composite
def intervals(draw):
    a, b = draw(small_rationals), draw(small_rationals)
    return Interval(min(a, b), max(a, b))


def _pick(iv: Interval, s: Fraction) -> Fraction:
    return iv.lo + s * iv.width


fractions01 = st.fractions(min_value=0, max_value=1, max_denominator=7)


@given(intervals(), intervals(), fractions01, fractions01)
def test_arithmetic_encloses(a, b, s, t):
    x, y = _pick(a, s), _pick(b, t)
    assert (a + b).contains(x + y)
    assert (a - b).contains(x - y)
    assert (a * b).contains(x * y)
    assert (a**2).contains(x**2)
    assert (a**3).contains(x**3)
    if not b.contains(0):
        assert (a / b).contains(x / y)


def test_division_by_zero_interval():
    with pytest.raises(ZeroDivisionError):
        Interval(1) / Interval(-1, 1)


def test_even_power_is_tight():
    assert Interval(-1, 2) ** 2 == Interval(0, 4)


@given(st.lists(small_rationals, min_size=1, max_size=6), intervals(), fractions01)
def test_horner_encloses(coeffs, iv, s):
    x = _pick(iv, s)
    value = sum(c * x**k for k, c in enumerate(coeffs))
    assert horner(coeffs, iv).contains(value)


@given(intervals(), intervals(), fractions01, fractions01)
def test_form_evaluation_encloses(a, b, s, t):
    p = parse_poly("3x^3 - x y z + 2 y^2 z - 5 z^3")
    pt = (_pick(a, s), _pick(b, t), Fraction(1))
    assert eval_real_form(p, (a, b, Interval(1))).contains(evaluate(p, pt).re)


def test_sign_and_det():
    assert Interval(1, 2).sign() == 1 and Interval(-2, -1).sign() == -1 and Interval(-1, 1).sign() == 0
    e = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert det3(*e) == 1
    assert det3(e[1], e[0], e[2]) == -1
