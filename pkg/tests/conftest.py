from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from ptamc.intervals import Interval, IntervalSet
from ptamc.model import build

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE = {}


def record(n: int, ok: bool, detail: str = ""):
    ACCEPTANCE[n] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


# values on the quarter grid of [0, 6]
quarters = st.integers(0, 24).map(lambda k: Fraction(k, 4))


@st.composite
def intervals(draw):
    lo = draw(quarters)
    if draw(st.booleans()) and draw(st.booleans()):
        return Interval(lo, draw(st.booleans()), None, False)
    hi = lo + draw(st.integers(0, 8).map(lambda k: Fraction(k, 4)))
    if hi == lo:
        return Interval.point(lo)
    return Interval(lo, draw(st.booleans()), hi, draw(st.booleans()))


interval_sets = st.lists(intervals(), max_size=4).map(IntervalSet)

# membership probes: every eighth, so both endpoints and interiors are hit
PROBES = [Fraction(k, 8) for k in range(0, 8 * 9)]


@pytest.fixture
def two_location():
    """q (rate 2) may leave for q' (rate 5) while x <= 1."""
    return build([{"name": "q", "rate": 2}, {"name": "q'", "rate": 5}],
                 [{"from": "q", "to": "q'", "guard": "x<=1"}, {"from": "q'", "to": "q'"}])


@pytest.fixture
def stopwatch_pair():
    def make(rate):
        return build([{"name": "q0", "labels": ["a"], "rate": rate}, {"name": "q1", "labels": ["b"], "rate": 0}],
                     [{"from": "q0", "to": "q1", "guard": "x>=2"}, {"from": "q1", "to": "q1"}])
    return make
