"""Shared fixtures and hypothesis strategies for the test suite."""

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from sumsetlab import IntervalSet, StructureParams, build_equality_structures


def iset(*pairs):
    """Build an interval set from (lo, hi) pairs, merging as needed."""
    return IntervalSet.of(*pairs)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo one verdict line per acceptance criterion after the run."""
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def rationals(draw, min_value=-8, max_value=8, max_denominator=12):
    den = draw(st.integers(min_value=1, max_value=max_denominator))
    num = draw(st.integers(min_value=min_value * den, max_value=max_value * den))
    return Fraction(num, den)


@st.composite
def interval_sets(draw, max_components=4, allow_empty=False, allow_points=True):
    n = draw(st.integers(min_value=0 if allow_empty else 1, max_value=max_components))
    endpoints = sorted(draw(st.lists(rationals(), min_size=2 * n, max_size=2 * n)))
    pairs = []
    for i in range(n):
        lo, hi = endpoints[2 * i], endpoints[2 * i + 1]
        if not allow_points and lo == hi:
            hi = lo + Fraction(1, 16)
        pairs.append((lo, hi))
    if not pairs:
        return IntervalSet.empty()
    return IntervalSet.of(*pairs)


@st.composite
def positive_interval_sets(draw, max_components=3):
    """Sets with positive measure, for bound checks that reject null sets."""
    s = draw(interval_sets(max_components=max_components, allow_points=False))
    return s


@pytest.fixture
def worked_params():
    """Parameters of the fully hand-checked equality pair."""
    return StructureParams(
        k=2,
        delta=Fraction(1, 2),
        b=Fraction(1, 5),
        b_plus=Fraction(1, 8),
        b_minus=Fraction(3, 40),
    )


@pytest.fixture
def worked_equality(worked_params):
    return build_equality_structures(worked_params)
