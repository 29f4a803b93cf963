from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ptamc.syntax import FormulaError
from ptamc.testkit.generators import RandomParams, gen_random, gen_repair
from ptamc.testkit.oracle import OracleBudget
from ptamc.testkit.oracle_wmtl import oracle_wmtl
from ptamc.wmtl import UndecidableInput, decide_exists, decode, encode, is_subword, to_ata
from ptamc.wmtl.ata import models, render_pbf
from ptamc.wmtl.search import discrete_successors, time_successors, wmtl_setup
from ptamc.wmtl.words import JointConfig, make_word


def word(*letters):
    return make_word(letters[0], letters[1:-1], letters[-1])


def test_encode_examples():
    assert encode(JointConfig("q", Fraction(0)), 4).render() == "{(q,0)} . {}"
    assert encode(JointConfig("q", Fraction(5)), 4).render() == "{} . {(q,T)}"


def test_subword_order():
    a = word({("l", "l", 1)}, set())
    b = word({("l", "l", 1), ("l", "l'", 2)}, {("l", "l", None)})
    assert is_subword(a, b) and not is_subword(b, a)
    c = word(set(), {("l", "l", 1)}, {("l", "l", 2)}, set())
    d = word(set(), {("l", "l", 2)}, {("l", "l", 1)}, set())
    assert not is_subword(c, d)
    assert is_subword(c, c)


def test_rate1_lift_off_then_wrap(stopwatch_pair):
    pta = stopwatch_pair(1)
    _, ata, cost, M = wmtl_setup(pta, "F{c>=2} b")
    w = word({("q", "q0", 0), ("l", "l1", 1)}, set())
    succ = [s.render() for s in time_successors(w, pta, cost, M)]
    # M = 2: the obligation at 1 reaches 2 and then leaves for the top letter
    assert succ == ["{} . {(q0,0),(l1,1)} . {}", "{(q0,1),(l1,2)} . {}", "{} . {(q0,1)} . {(l1,T)}",
                    "{(q0,2)} . {(l1,T)}", "{} . {(q0,T),(l1,T)}"]


def test_rate0_moves_only_the_clock(stopwatch_pair):
    pta = stopwatch_pair(0)
    _, ata, cost, M = wmtl_setup(pta, "F{c>=2} b")
    w = word(set(), {("q", "q0", 0)}, {("l", "l1", 0)}, set())
    succ = [s.render() for s in time_successors(w, pta, cost, M)]
    assert succ[0] == "{} . {(q0,0),(l1,0)} . {}"
    assert succ[1] == "{} . {(l1,0)} . {(q0,0)} . {}"
    assert succ[2] == "{(q0,1)} . {(l1,0)} . {}"
    alone = word(set(), {("q", "q0", None)})
    assert time_successors(alone, pta, cost, M) == []


def test_spawning_branches():
    ata = to_ata("G(a => (F{<=3} b | F{>=2} c))")
    ms = models(ata.delta["l1"], frozenset({"a"}))
    assert sorted(sorted(m) for m in ms) == [[("l1", False), ("l2", True)], [("l1", False), ("l3", True)]]
    assert models(ata.delta["l2"], frozenset({"b"}), 4, True) == [frozenset({("l2", False)})]
    assert render_pbf(ata.delta["l3"]) == "((c & x>=2) | l3)"


def test_discrete_reset_goes_to_first_letter():
    from ptamc.model import build

    pta = build([{"name": "p", "labels": ["a"], "rate": 1}, {"name": "r", "labels": ["b"]}],
                [{"from": "p", "to": "r", "guard": "x>1", "reset": True, "cost": 1}, {"from": "r", "to": "r"}])
    _, ata, cost, M = wmtl_setup(pta, "a U{c>=1} b")
    w = encode(JointConfig("p", Fraction(3, 2), frozenset({("l1", Fraction(1, 2))})), M)
    (w2,) = discrete_successors(w, pta, ata, cost, M)
    # the clock resets; the obligation pays the discrete cost and is discharged on b
    assert w2.render() == "{(r,0)} . {}"
    (w3,) = discrete_successors(encode(JointConfig("p", Fraction(3, 2), frozenset({("l1", Fraction(0))})), M),
                                pta, ata, cost, M)
    assert w3.render() == "{(r,0)} . {}"
    _, ata2, _, M2 = wmtl_setup(pta, "a U{c>=2} b")
    w4 = encode(JointConfig("p", Fraction(3, 2), frozenset({("l1", Fraction(0))})), M2)
    assert discrete_successors(w4, pta, ata2, cost, M2) == set()


@pytest.mark.parametrize("rate, formula, expected", [
    (1, "F{c>=2} b", True), (0, "F{c>=2} b", False), (0, "F{c<=0} b", True),
    (1, "a U{c=2} b", True), (1, "a U{c<2} b", False), (1, "G a", True), (0, "F{c>=3} b", False),
])
def test_stopwatch_examples(stopwatch_pair, rate, formula, expected):
    pta = stopwatch_pair(rate)
    r = decide_exists(pta, formula)
    assert r.verdict is expected
    if expected:
        assert r.witness[-1].accepting(to_ata(formula))
        assert oracle_wmtl(pta, formula) is True


def test_rejects_non_stopwatch():
    with pytest.raises(UndecidableInput):
        decide_exists(gen_repair(), "F{c<=47} OK")
    with pytest.raises(FormulaError):
        decide_exists(gen_repair(), "F{d<=47} OK")


@given(st.integers(0, 10_000), st.sampled_from(["F{c<=2} b", "G{c<=2} a", "a U{c=1} b", "F(a & F{c>=1} b)"]))
def test_pruned_and_unpruned_agree(seed, formula):
    pta = gen_random(RandomParams(rates=(0, 1), max_discrete=1, max_constant=2), seed)
    r = decide_exists(pta, formula)
    u = decide_exists(pta, formula, prune=False, max_nodes=1500)
    assert u.verdict is None or u.verdict == r.verdict
    if oracle_wmtl(pta, formula, budget=OracleBudget(depth=3, den=2)):
        assert r.verdict is True


@given(st.integers(0, 10_000))
def test_decode_is_a_representative(seed):
    import random

    rng = random.Random(seed)
    M = 3
    obl = frozenset((f"l{rng.randint(1, 3)}", Fraction(rng.randint(0, 20), rng.choice([1, 2, 3, 5])))
                    for _ in range(rng.randint(0, 4)))
    cfg = JointConfig("q", Fraction(rng.randint(0, 20), rng.choice([1, 2, 4])), obl)
    w = encode(cfg, M)
    assert encode(decode(w, M), M) == w


def test_search_tree_dot(stopwatch_pair):
    r = decide_exists(stopwatch_pair(1), "F{c>=2} b")
    dot = r.tree.to_dot()
    assert dot.startswith("digraph") and "peripheries=2" in dot
    assert r.stats["nodes"] == len(r.tree.nodes)
