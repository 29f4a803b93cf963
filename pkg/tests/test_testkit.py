from fractions import Fraction

import pytest

from ptamc.model import build, validate_nonblocking
from ptamc.syntax import parse_formula
from ptamc.testkit.gadgets import Dec, Halt, Inc, TwoCounterMachine, gen_2cm_gadgets, simulate
from ptamc.testkit.generators import gen_binary, gen_repair
from ptamc.testkit.oracle import OracleBudget, oracle_wctl
from ptamc.testkit.oracle_wmtl import holds_on_run, oracle_wmtl
from ptamc.testkit.pathcost import milestone_costs
from ptamc.intervals import Interval, IntervalSet

MACHINES = [
    TwoCounterMachine((Halt(),)),
    TwoCounterMachine((Inc(1, 1), Halt())),
    TwoCounterMachine((Inc(1, 1), Dec(1, 2, 3), Halt(), Inc(2, 1))),
    TwoCounterMachine((Inc(1, 1), Inc(1, 2), Inc(2, 3), Dec(1, 4, 3), Dec(2, 5, 4), Halt())),
]


def test_machine_validation():
    with pytest.raises(ValueError, match="exactly one halt"):
        TwoCounterMachine((Inc(1, 0),))
    with pytest.raises(ValueError, match="outside"):
        TwoCounterMachine((Inc(1, 5), Halt()))
    with pytest.raises(ValueError, match="counters"):
        TwoCounterMachine((Inc(3, 1), Halt()))
    assert MACHINES[3].run()[-1] == (5, 0, 0)


@pytest.mark.parametrize("m", MACHINES)
def test_intended_run_satisfies_gadget_formula(m):
    pta, formula = gen_2cm_gadgets(m)
    states, moves = simulate(m, pta)
    f = parse_formula(formula, "wmtl")
    assert holds_on_run(pta, f, states, moves)
    _, c1, c2 = m.run()[-1]
    # the clock on entering Halt encodes the counters
    assert states[-1][1] == Fraction(1, 2 ** c1 * 3 ** c2)


def test_increment_halves_the_clock():
    m = MACHINES[1]
    pta, formula = gen_2cm_gadgets(m)
    states, moves = simulate(m, pta)
    assert states[-1] == ("m1.Halt", Fraction(1, 2))
    # stretching the stay in C breaks the cost-3 condition
    d, e = moves[3]
    bad = list(moves)
    bad[3] = (d + Fraction(1, 8), e)
    bad_states = list(states)
    bad_states[4] = (states[4][0], states[4][1] + Fraction(1, 8))
    bad_states[5] = (states[5][0], states[5][1] + Fraction(1, 8))
    assert not holds_on_run(pta, parse_formula("G((A & incr) => (!D U{=3} D))", "wmtl"), bad_states, bad)


def test_decrement_restores_the_clock():
    m = TwoCounterMachine((Inc(2, 1), Dec(2, 2, 2), Halt()))
    pta, formula = gen_2cm_gadgets(m)
    states, moves = simulate(m, pta)
    entry = [s for s in states if s[0] == "m1.A0"][0]
    assert entry[1] == Fraction(1, 3)
    assert states[-1] == ("m2.Halt", Fraction(1))
    assert holds_on_run(pta, parse_formula(formula, "wmtl"), states, moves)


def test_gadgets_are_outside_the_fragment():
    pta, _ = gen_2cm_gadgets(MACHINES[2])
    assert not pta.cost().is_stopwatch()
    assert max(pta.cost().rate.values()) == 3


def test_oracle_wctl_examples():
    p = gen_repair()
    assert oracle_wctl(p, "EF{c<=47} OK", ("Problem", 0), OracleBudget(depth=6, den=24)) is True
    assert oracle_wctl(p, "EF{c<=46} OK", ("Problem", 0), OracleBudget(depth=3, den=2)) is None
    assert oracle_wctl(p, "Problem", ("Problem", 0), OracleBudget(depth=0)) is True
    with pytest.raises(ValueError):
        OracleBudget(den=0)


def test_oracle_wmtl_examples(stopwatch_pair):
    assert oracle_wmtl(stopwatch_pair(1), "F{c>=2} b", budget=OracleBudget(depth=2)) is True
    assert oracle_wmtl(stopwatch_pair(0), "F{c>=2} b", budget=OracleBudget(depth=2)) is None
    assert oracle_wmtl(stopwatch_pair(1), "a", budget=OracleBudget(depth=0)) is True
    with pytest.raises(ValueError):
        oracle_wmtl(gen_repair(), "F{c<=3} OK")


def test_binary_generator_shape():
    pta, f = gen_binary(1)
    assert [pta.cost().rate[q] for q in pta.locations] == [1, 2, 4, 1, 2, 1, 1]
    assert validate_nonblocking(pta) == []


def test_pathcost_two_location(two_location):
    assert milestone_costs(two_location, 0, 1, "q", "q'") == IntervalSet([Interval(2, True, 5, True)])
    assert milestone_costs(two_location, 0, 1, "q", "q") == IntervalSet.point(2)
    assert milestone_costs(two_location, 1, 2, "q", "q'") == IntervalSet.point(5)


def test_pathcost_open_endpoint():
    # r is only entered after a positive stay in q, so the dearest cost 3 is never reached
    pta = build([{"name": "q", "rate": 1}, {"name": "r", "rate": 3}],
                [{"from": "q", "to": "r", "guard": "x>0"}, {"from": "r", "to": "r"}])
    assert milestone_costs(pta, 0, 1, "q", "r") == IntervalSet([Interval(1, True, 3, False)])
