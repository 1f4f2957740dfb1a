from __future__ import annotations

import os
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from wallx.ring import SPoly, SRat

settings.register_profile(
    "wallx",
    deadline=None,
    max_examples=int(os.environ.get("WALLX_EXAMPLES", "60")),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("wallx")


small_ints = st.integers(min_value=-4, max_value=4)
coeffs = st.one_of(
    st.integers(min_value=-5, max_value=5),
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
)


@st.composite
def spolys(draw, max_terms: int = 4, exp_range: int = 4):
    terms = draw(st.dictionaries(st.integers(-exp_range, exp_range), coeffs, max_size=max_terms))
    return SPoly.from_terms(terms)


@st.composite
def srats(draw, nonzero: bool = False):
    num = draw(spolys())
    if nonzero and num.is_zero():
        num = SPoly.const(1)
    den = draw(spolys(max_terms=3, exp_range=3))
    if den.is_zero():
        den = SPoly.const(1)
    return SRat(num, den)


def evaluate_terms(terms: dict, x: Fraction) -> Fraction:
    """Oracle: sum c x^e by plain Fraction arithmetic."""
    return sum((Fraction(c) * x ** e for e, c in terms.items()), Fraction(0))


SAMPLE_POINTS = [Fraction(p, q) for p, q in [(2, 1), (3, 2), (-5, 3), (7, 11), (13, 5), (-2, 7), (17, 3)]]


@pytest.fixture
def rng():
    return random.Random(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
