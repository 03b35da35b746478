import os
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from cremona.poly import Form, monomials, parse_form
from cremona.ratmap import Component, ParamScheme

settings.register_profile("default", max_examples=40, deadline=None)
settings.register_profile("stress", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def F(text, n=4, var="x"):
    return parse_form(text, n, var)


def T(text, k=2):
    return parse_form(text, k, "t")


def twisted_cubic():
    return Component(2, tuple(T(s) for s in ("t0^3", "t0^2*t1", "t0*t1^2", "t1^3")))


def line(a, b):
    return Component.linear_span([a, b])


def scheme(*comps):
    return ParamScheme(tuple(comps))


small = st.integers(min_value=-5, max_value=5)


@st.composite
def forms(draw, nvars=3, max_degree=3, degree=None):
    d = draw(st.integers(0, max_degree)) if degree is None else degree
    mons = monomials(nvars, d)
    coeffs = draw(st.lists(small, min_size=len(mons), max_size=len(mons)))
    return Form(nvars, d, {e: Fraction(c) for e, c in zip(mons, coeffs) if c})


@st.composite
def points(draw, n=3):
    v = draw(st.lists(small, min_size=n, max_size=n).filter(any))
    return [Fraction(c) for c in v]


@pytest.fixture
def cubic():
    return twisted_cubic()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for text in ACCEPTANCE_LINES:
            terminalreporter.write_line(text)
