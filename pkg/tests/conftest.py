from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from realslice.poly import GaussianRational, HomPoly

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
gaussians = st.builds(GaussianRational, small_rationals, small_rationals)


@st.composite
def hom_polys(draw, degree=None, real=False, max_degree=4):
    d = draw(st.integers(0, max_degree)) if degree is None else degree
    exps = [(a, b, d - a - b) for a in range(d + 1) for b in range(d + 1 - a)]
    coeff = small_rationals if real else gaussians
    terms = {e: draw(coeff) for e in exps if draw(st.booleans())}
    return HomPoly(d, terms)


@pytest.fixture
def F():
    return Fraction
