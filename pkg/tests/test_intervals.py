from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import PROBES, interval_sets, intervals, quarters
from ptamc.intervals import (Interval, IntervalSet, constraint_set, meets_constraint, minkowski_sum,
                             parse_interval_set, saturate, scale, shift, subtract_clamped)
from ptamc.rational import lcm, parse_rational, render


def members(s):
    return {v for v in PROBES if v in s}


def test_make_rejects_empty_bounds():
    assert Interval.make(1, False, 1, True) is None
    assert Interval.make(2, True, 1, True) is None
    assert Interval.make(1, True, 1, True) == Interval.point(1)
    with pytest.raises(ValueError):
        Interval(1, True, 1, False)


def test_rendering():
    s = IntervalSet([Interval(0, True, 1, False), Interval.point(2), Interval(3, False, None, False)])
    assert str(s) == "[0,1) u {2} u (3,inf)"
    assert str(IntervalSet()) == "{}"
    assert render(Fraction(3, 6)) == "1/2"
    assert parse_rational("5/10") == Fraction(1, 2)
    assert parse_rational("2") == 2
    assert lcm(2, 3, 4) == 12


def test_adjacent_pieces_merge():
    s = IntervalSet([Interval(0, True, 1, False), Interval.point(1), Interval(1, False, 2, True)])
    assert str(s) == "[0,2]"
    gap = IntervalSet([Interval(0, True, 1, False), Interval(1, False, 2, True)])
    assert len(gap) == 2 and 1 not in gap


@given(interval_sets)
def test_parse_roundtrip(s):
    assert parse_interval_set(str(s)) == s


@given(interval_sets, interval_sets)
def test_boolean_operations_pointwise(a, b):
    assert members(a.union(b)) == members(a) | members(b)
    assert members(a.intersect(b)) == members(a) & members(b)
    assert members(a.minus(b)) == members(a) - members(b)
    assert a.union(b) == b.union(a)


@given(interval_sets)
def test_complement_is_involutive(s):
    c = s.complement()
    assert members(c) == set(PROBES) - members(s)
    assert c.complement() == s


@given(interval_sets, interval_sets)
def test_canonical_form_is_unique(a, b):
    # equal as point sets on a dense probe grid => equal objects
    if members(a) == members(b) and a.endpoints() <= set(PROBES) and b.endpoints() <= set(PROBES):
        inf_a = any(iv.hi is None for iv in a)
        inf_b = any(iv.hi is None for iv in b)
        if inf_a == inf_b:
            assert a == b


@given(intervals(), intervals())
def test_minkowski_sum_contains_sums(a, b):
    s = minkowski_sum(IntervalSet([a]), IntervalSet([b]))
    for u in PROBES:
        if u in a:
            for v in PROBES:
                if v in b:
                    assert u + v in s
    assert s.endpoints() <= {e1 + e2 for e1 in IntervalSet([a]).endpoints() | {0}
                             for e2 in IntervalSet([b]).endpoints() | {0}} | {a.lo + b.lo}


@given(interval_sets, quarters)
def test_shift_and_scale(s, k):
    assert members(shift(s, k)) >= {v + k for v in members(s) if v + k in set(PROBES)}
    assert members(scale(s, 2)) >= {2 * v for v in members(s) if 2 * v in set(PROBES)}
    assert scale(s, 0) in (IntervalSet(), IntervalSet.point(0))


@given(interval_sets, st.integers(0, 5))
def test_saturate_preserves_comparisons(s, c):
    sat = saturate(s, c + 1)
    for op in ("<", "<=", "=", ">=", ">"):
        assert meets_constraint(sat, op, c) == meets_constraint(s, op, c)


@given(interval_sets, st.sampled_from(["<", "<=", "=", ">=", ">"]), st.integers(0, 5))
def test_meets_constraint_matches_probes(s, op, c):
    expected = bool(members(s) & members(constraint_set(op, c)))
    if any(iv.hi is None for iv in s) and op in (">", ">="):
        expected = True
    assert meets_constraint(s, op, c) == expected


def test_subtract_clamped():
    need = IntervalSet([Interval(3, True, 5, False)])
    paid = IntervalSet([Interval(1, False, 2, True)])
    # {n - p} = (1, 4) u clamp
    assert subtract_clamped(need, paid) == IntervalSet([Interval(1, True, 4, False)])
    assert subtract_clamped(need, IntervalSet([Interval(4, True, None, False)])) == IntervalSet(
        [Interval(0, True, 1, False)])
