import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ptamc.intervals import Interval, IntervalSet
from ptamc.model import run_cost, states_of
from ptamc.regions import Partition
from ptamc.syntax import FormulaError, parse_formula
from ptamc.testkit.generators import RandomParams, gen_formula, gen_random, gen_repair
from ptamc.testkit.oracle import OracleBudget, oracle_wctl
from ptamc.wctl.costgraph import build_cost_graph, describe_edge
from ptamc.wctl.engine import check, holds
from ptamc.wctl.granularity import granularity, grid_aligned
from ptamc.wctl.rewrite import is_core, rewrite
from ptamc.wctl.witness import visit_bound, witness_search


def test_two_location_milestone_edge(two_location):
    g = build_cost_graph(two_location, two_location.classical())
    edges = {describe_edge(g, s, d, lab) for s, d, lab, kind in g.edge_list() if kind == "milestone"}
    assert "(q,{0}) -> (q',{1}) [2,5]" in edges
    assert "(q,{0}) -> (q,{1}) {2}" in edges


def test_two_location_until(two_location):
    # one time unit costs anything between 2 (stay in q) and 5 (leave at once)
    assert holds(two_location, "EF{c=2} (q' & EF{=0} q')")
    assert holds(two_location, "E true U{c>=5} q'")
    assert not holds(two_location, "E q U{c>2} q'")
    assert holds(two_location, "E q U{c<=2} q'")


def test_repair_granularity():
    g = granularity(gen_repair(), "EF{c<=47} OK")
    assert (g.C, g.h, g.M, g.g) == (12, 1, 20, Fraction(1, 12))
    assert g.sample_count == 482


def test_repair_satisfaction_sets():
    p = gen_repair()
    sat = check(p, "EF{c<=35} OK").sat
    # cheapest repair from Cheap is 45 - 2x (leave at 20, pay 5)
    assert sat["Cheap"] == IntervalSet([Interval(5, True, 20, True)])
    assert grid_aligned(sat, granularity(p, "EF{c<=35} OK"))


def test_rewrite_reaches_core():
    rng = random.Random(4)
    for _ in range(200):
        f = parse_formula(gen_formula(rng, 3))
        assert is_core(rewrite(f))


def test_unknown_cost_is_rejected():
    with pytest.raises(FormulaError, match="unknown cost"):
        check(gen_repair(), "EF{d<=3} OK")


def test_witness_run_is_concrete():
    p = gen_repair()
    w = witness_search(p, "EF{c<=47} OK", ("Problem", 0))
    assert w is not None and w.run is not None
    assert w.value == run_cost(p, w.run) <= 47
    assert states_of(p, w.run)[-1].location == "OK"
    assert witness_search(p, "EF{c<=46} OK", ("Problem", 0)) is None
    assert visit_bound(p, "c", 47, 1) == 47 * 12 // 2 + 2


@settings(max_examples=25)
@given(st.integers(0, 10_000))
def test_oracle_never_contradicts_engine(seed):
    rng = random.Random(seed)
    pta = gen_random(RandomParams(max_constant=2, max_discrete=1), seed)
    text = gen_formula(rng, 2, cmax=3)
    sat = check(pta, text).sat
    budget = OracleBudget(depth=4, den=2)
    for q in pta.locations:
        for k in range(2 * pta.max_constant + 3):
            x = Fraction(k, 2)
            if x in pta.invariant[q]:
                v = oracle_wctl(pta, text, (q, x), budget)
                assert v is None or v == sat.holds(q, x), (text, q, x)


def test_cost_graph_matches_classical_on_stopwatch_costs():
    # stopwatch milestones: [0, d] when a zero-rate and a one-rate location can be combined
    p = gen_random(RandomParams(rates=(0, 1)), 11)
    g = build_cost_graph(p, Partition.classical(p.max_constant))
    for s, d, lab, kind in g.edge_list():
        if kind == "milestone":
            assert lab.endpoints() <= {0, 1}
