"""Acceptance criteria 1-10.

Each check returns (ok, detail); the pytest wrappers record one line per
criterion (printed in the terminal summary) and then assert.  Running this
file directly prints the same lines.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction
from functools import lru_cache

import pytest

from conftest import record
from ptamc.intervals import IntervalSet
from ptamc.regions import Partition
from ptamc.syntax import AU, EGFalse, Not, TRUE, neg, parse_formula
from ptamc.testkit.generators import RandomParams, gen_binary, gen_formula, gen_random, gen_repair
from ptamc.testkit.oracle import Oracle, OracleBudget
from ptamc.testkit.oracle_wmtl import oracle_wmtl
from ptamc.testkit.pathcost import milestone_costs
from ptamc.wctl.costgraph import build_cost_graph
from ptamc.wctl.engine import Labeler, check, holds
from ptamc.wctl.granularity import Granularity, granularity, grid_aligned
from ptamc.wctl.rewrite import au_constrained, eg_constrained, eg_false_gt, rewrite
from ptamc.wctl.witness import witness_search
from ptamc.wmtl import JointConfig, decide_exists, encode, to_ata
from ptamc.wmtl.ata import render_pbf
from ptamc.wmtl.joint import discrete_steps, time_encodings
from ptamc.wmtl.search import discrete_successors, time_successors, wmtl_setup
from ptamc.wmtl.words import Q


# ------------------------------------------------------------------ 1, 2: repair


def criterion_1():
    p = gen_repair()
    t = time.time()
    bad = []
    if not holds(p, "AG(Problem => EF{c<=47} OK)"):
        bad.append("<=47 should hold")
    if holds(p, "AG(Problem => EF{c<=46} OK)"):
        bad.append("<=46 should fail")
    flips = [("Cheap", x, 45 - 2 * x) for x in (0, 1, 5)] + [("Expensive", x, 60 - 4 * x) for x in (4, 10)]
    for q, x, b in flips:
        # cheapest cost is exactly b: attained at b, not below it
        if not holds(p, f"EF{{c<={b}}} OK", q, x) or holds(p, f"EF{{c<{b}}} OK", q, x):
            bad.append(f"flip at ({q},{x}) is not {b}")
    return not bad, "; ".join(bad) or f"47/46 and 5 flip points exact ({time.time() - t:.1f}s)"


def criterion_2():
    p = gen_repair()
    t = time.time()
    a = holds(p, "AG(Problem => AF{c<=56} OK)")
    b = holds(p, "AG(Problem => AF{c<=55} OK)")
    return a and not b, f"AF<=56 {a}, AF<=55 {b} ({time.time() - t:.1f}s)"


# ------------------------------------------------------------------ 3: granularity necessity


def criterion_3():
    out = []
    ok = True
    for n in (1, 2, 3):
        pta, f = gen_binary(n)
        sat = check(pta, f).sat
        expected = IntervalSet.empty()
        for p in range(2 ** n):
            expected = expected.union(IntervalSet.point(Fraction(p, 2 ** (n - 1))))
        gran = granularity(pta, f)
        samples_ok = all(sat.holds("a", x) == (x in expected) for x in gran.samples())
        ok &= sat["a"] == expected and samples_ok
        out.append(f"n={n}: {sat['a']}")
    return ok, "; ".join(out)


# ------------------------------------------------------------------ 4: milestone edges vs brute force


def criterion_4(models=50):
    t = time.time()
    compared = nonempty = 0
    bad = []
    for seed in range(models):
        pta = gen_random(RandomParams(locations=3, edges=6, rates=(0, 1, 2, 3), reset_prob=0.2), seed)
        m = pta.max_constant
        part = Partition.of([Fraction(k, 2) for k in range(2 * m + 1)]) if seed % 2 else Partition.classical(m)
        g = build_cost_graph(pta, part)
        labels = {(s, d): lab for s, d, lab, kind in g.edge_list() if kind == "milestone"}
        for i in range(part.n):
            a, b = part.constants[i], part.constants[i + 1]
            for q in pta.locations:
                if not g.inv_ok(q, 2 * i):
                    continue
                for q2 in pta.locations:
                    brute = milestone_costs(pta, a, b, q, q2)
                    got = labels.get(((q, 2 * i), (q2, 2 * i + 2)), IntervalSet.empty())
                    compared += 1
                    nonempty += bool(brute)
                    if got != brute:
                        bad.append(f"seed {seed} ({q},{a})->({q2},{b}): graph {got}, runs {brute}")
    detail = f"{compared} milestone pairs, {nonempty} nonempty, {len(bad)} mismatches ({time.time() - t:.0f}s)"
    return not bad, detail + ("; " + bad[0] if bad else "")


# ------------------------------------------------------------------ 5: witness search vs labelling


def witness_corpus():
    corpus = [(gen_repair(), ["EF{c<=47} OK", "E !OK U{c>=30} OK", "EF{c=12} OK", "E (Problem | Cheap) U{c>5} OK"])]
    pb, _ = gen_binary(2)
    corpus.append((pb, ["E (a | b) U{=0} !a", "E !b U{=4} b", "E !b U{<4} b"]))
    for s in range(20):
        pta = gen_random(RandomParams(locations=3, edges=5, max_constant=2, rates=(0, 1, 2), max_discrete=1), s)
        rng = random.Random(s)
        fs = [f"E {rng.choice(['a', '!a', 'true', '(a | b)'])} U{{{op}{rng.randint(0, 4)}}} "
              f"{rng.choice(['b', 'a', '!b'])}" for op in ("<=", "<", ">=", ">", "=")]
        corpus.append((pta, fs))
    return corpus


def criterion_5():
    t = time.time()
    points = positives = 0
    bad = []
    for pta, fs in witness_corpus():
        lab = Labeler(pta)
        for f in fs:
            sat = check(pta, f, labeler=lab).sat
            for q in pta.locations:
                for x in granularity(pta, f).samples():
                    if x not in pta.invariant[q]:
                        continue
                    expected = sat.holds(q, x)
                    w = witness_search(pta, f, (q, x), labeler=lab)
                    points += 1
                    positives += expected
                    if (w is not None) != expected or (w is not None and w.run is None):
                        bad.append(f"{f} at ({q},{x}): label {expected}, witness {w}")
    detail = f"{points} sample points, {positives} positive, {len(bad)} disagreements ({time.time() - t:.0f}s)"
    return not bad, detail + ("; " + bad[0] if bad else "")


# ------------------------------------------------------------------ 6: the nine equivalences


EQUIVALENCES = [("AU", ">="), ("AU", ">"), ("EGF", ">"), ("AU", "<="), ("EG", "<="),
                ("AU", "<"), ("EG", "<"), ("AU", "="), ("EG", "=")]
SUBFORMULAS = ["a", "b", "!a", "a | b", "true", "E a U b", "AF b", "EG a"]


def equivalence_instance(kind, op, seed):
    """(model, LHS by its semantics, RHS as rewritten)."""
    rng = random.Random(seed)
    pta = gen_random(RandomParams(locations=3, edges=4, max_constant=2, rates=(0, 1, 2), max_discrete=1), seed)
    cost = pta.costs[0].name
    c = rng.randint(0, 3)
    f, g = parse_formula(rng.choice(SUBFORMULAS)), parse_formula(rng.choice(SUBFORMULAS))
    if kind == "AU":
        return pta, AU(f, g, cost, op, c), au_constrained(f, g, cost, op, c)
    if kind == "EG":
        # E G{op c} g is !A F{op c} !g, evaluated by the oracle from the until semantics
        return pta, Not(AU(TRUE, neg(g), cost, op, c)), eg_constrained(g, cost, op, c)
    return pta, EGFalse(cost, ">", c), eg_false_gt(cost, c)


def criterion_6(instances=25):
    t = time.time()
    lines, bad = [], []
    for k, (kind, op) in enumerate(EQUIVALENCES):
        both = 0
        for s in range(instances):
            seed = 1000 * k + s
            pta, lhs, rhs = equivalence_instance(kind, op, seed)
            engine = Labeler(pta).sat(rewrite(rhs))
            orc = Oracle(pta, OracleBudget(depth=5, den=2))
            for q in pta.locations:
                for j in range(2 * pta.max_constant + 3):
                    x = Fraction(j, 2)
                    if x not in pta.invariant[q] or not orc.is_live(q, x):
                        continue
                    lv, rv = orc.eval(lhs, q, x), orc.eval(rhs, q, x)
                    e = engine.holds(q, x)
                    if lv is not None and rv is not None:
                        both += 1
                        if lv != rv:
                            bad.append(f"#{k + 1} seed {seed} ({q},{x}): LHS {lv}, RHS {rv}")
                    if lv is not None and lv != e:
                        bad.append(f"#{k + 1} seed {seed} ({q},{x}): LHS {lv}, engine {e}")
        lines.append(f"{kind}{op}:{both}")
        if both == 0:
            bad.append(f"#{k + 1}: no definite comparison")
    detail = f"definite pairs {' '.join(lines)}, {len(bad)} disagreements ({time.time() - t:.0f}s)"
    return not bad, detail + ("; " + bad[0] if bad else "")


# ------------------------------------------------------------------ 7: stopwatch degeneration


def classical_rep(x, m):
    """The sample point of x's classical region."""
    if x > m:
        return Fraction(m) + Fraction(1, 2)
    return x if x.denominator == 1 else Fraction(int(x)) + Fraction(1, 2)


def criterion_7(models=25):
    t = time.time()
    bad = []
    points = 0
    for seed in range(models):
        rng = random.Random(seed)
        pta = gen_random(RandomParams(locations=3, edges=5, max_constant=3, rates=(0, 1), max_discrete=0), seed)
        text = gen_formula(rng, 2, cmax=3)
        while "{" not in text:
            text = gen_formula(rng, 2, cmax=3)
        sat = check(pta, text).sat
        gran = granularity(pta, text)
        # a refinement grid as if the rates were {1, 2}: 1/2^h
        fine = Granularity(2, max(gran.h, 1), pta.max_constant)
        if gran.C != 1 or not grid_aligned(sat, Granularity(1, 0, pta.max_constant)):
            bad.append(f"seed {seed} {text}: not classical, C={gran.C}, {sat.render()}")
            continue
        for q in pta.locations:
            for x in fine.samples():
                if x not in pta.invariant[q]:
                    continue
                points += 1
                if sat.holds(q, x) != sat.holds(q, classical_rep(x, pta.max_constant)):
                    bad.append(f"seed {seed} {text} at ({q},{x})")
    detail = f"{models} stopwatch models, {points} fine sample points, {len(bad)} disagreements ({time.time() - t:.0f}s)"
    return not bad, detail + ("; " + bad[0] if bad else "")


# ------------------------------------------------------------------ 8: WMTL engine


SPAWN = "G(a => (F{<=3} b | F{>=2} c))"
EXAMPLE_WORD = "{} . {(l2,2)} . {(l3,1)} . {(q,1),(l2,2)} . {(l1,T),(l3,T)}"
WMTL_FORMULAS = ["F{c<=2} b", "F{c>=3} b", "G{c<=2} a", "a U{c=2} b", "G(a => F{c<=1} b)",
                 "!(a U{c>1} !b)", "F(a & F{c=1} b)", "(F{c<=1} a) & (F{c>=2} b)"]


SPAWN_DESCRIPTION = [
    "l1 (accepting): ((!a | (l2[x:=0] | l3[x:=0])) & l1)",
    "l2: ((b & x<=3) | l2)",
    "l3: ((c & x>=2) | l3)",
]


def spawn_shape():
    """l1 loops and spawns l2 or l3 with a reset on a."""
    ata = to_ata(SPAWN)
    problems = []
    if ata.describe() != SPAWN_DESCRIPTION:
        problems.append("transitions " + " / ".join(ata.describe()))
    if render_pbf(ata.initial) != "l1[x:=0]":
        problems.append(f"initial {render_pbf(ata.initial)}")
    return problems


@lru_cache(maxsize=None)
def wmtl_corpus_results(models=30):
    rows = []
    for seed in range(models):
        pta = gen_random(RandomParams(rates=(0, 1), max_discrete=2, max_constant=2), seed)
        for f in WMTL_FORMULAS:
            t = time.time()
            r = decide_exists(pta, f)
            dt = time.time() - t
            u = decide_exists(pta, f, prune=False, max_nodes=3000)
            o = oracle_wmtl(pta, f, budget=OracleBudget(depth=4, den=2))
            rows.append((seed, f, r.verdict, u.verdict, o, r.stats["nodes"], dt))
    return tuple(rows)


def criterion_8():
    t = time.time()
    problems = spawn_shape()
    cfg = JointConfig("q", Fraction(16, 10), frozenset({
        ("l1", Fraction(52, 10)), ("l2", Fraction(22, 10)), ("l2", Fraction(26, 10)),
        ("l3", Fraction(15, 10)), ("l3", Fraction(45, 10))}))
    word = encode(cfg, 4).render()
    if word != EXAMPLE_WORD:
        problems.append(f"example word {word}")
    rows = wmtl_corpus_results()
    misses = [r for r in rows if r[4] is True and r[2] is not True]
    split = [r for r in rows if r[3] is not None and r[3] != r[2]]
    undecided = [r for r in rows if r[2] is None]
    if misses:
        problems.append(f"oracle positive missed: {misses[0][:2]}")
    if split:
        problems.append(f"pruned/unpruned differ: {split[0][:2]}")
    if undecided:
        problems.append(f"no verdict: {undecided[0][:2]}")
    pos = sum(r[4] is True for r in rows)
    full = sum(r[3] is not None for r in rows)
    detail = (f"(a) automaton shape {'ok' if not spawn_shape() else 'differs'}; (b) {word}; "
              f"(c) {len(rows)} runs, {pos} oracle positives confirmed, max {max(r[5] for r in rows)} nodes; "
              f"(d) {full} unpruned runs terminated, all agree ({time.time() - t:.0f}s)")
    return not problems, "; ".join(problems) if problems else detail


# ------------------------------------------------------------------ 9: bisimulation


def random_representative(w, M, rng):
    """A configuration with encoding w, fractional parts drawn at random."""
    p = len(w.interior)
    fracs = sorted(rng.sample(range(1, 60), p))
    loc, clock, obl = None, None, set()
    for i, a in enumerate(w.letters):
        for kind, name, reg in a:
            if reg is None:
                v = Fraction(M) + Fraction(rng.randint(1, 30), rng.randint(1, 7))
            elif 0 < i <= p:
                v = reg + Fraction(fracs[i - 1], 60)
            else:
                v = Fraction(reg)
            if kind == Q:
                loc, clock = name, v
            else:
                obl.add((name, v))
    return JointConfig(loc, clock, frozenset(obl))


BISIM_FORMULAS = ["F{c<=2} b", "G{c>=1} a", "a U{c=2} b", "G(a => F{c<=1} b)", "!(a U{c>1} !b)"]


def criterion_9(pairs=500):
    t = time.time()
    n = 0
    bad = []
    seed = 0
    while n < pairs:
        seed += 1
        rng = random.Random(seed)
        pta = gen_random(RandomParams(rates=(0, 1), max_discrete=3, max_constant=3, locations=4, edges=6), seed)
        _, ata, cost, M = wmtl_setup(pta, rng.choice(BISIM_FORMULAS))
        q = rng.choice(pta.locations)
        x = Fraction(rng.randint(0, 4 * (M + 1)), rng.choice([1, 2, 3, 4, 6]))
        if x not in pta.invariant[q]:
            continue
        obl = frozenset((rng.choice(ata.locations), Fraction(rng.randint(0, 4 * (M + 1)), rng.choice([1, 2, 3, 4, 6])))
                        for _ in range(rng.randint(0, 3)))
        g1 = JointConfig(q, x, obl)
        w = encode(g1, M)
        g2 = random_representative(w, M, rng)
        if g2.clock not in pta.invariant[q]:
            continue
        n += 1
        assert encode(g2, M) == w
        t1, t2 = time_encodings(g1, pta, cost, M), time_encodings(g2, pta, cost, M)
        d1 = {encode(h, M) for h in discrete_steps(g1, pta, ata, cost, M)}
        d2 = {encode(h, M) for h in discrete_steps(g2, pta, ata, cost, M)}
        if t1 != t2 or d1 != d2:
            bad.append(f"seed {seed}: {w}")
        elif t1 != time_successors(w, pta, cost, M) or d1 != discrete_successors(w, pta, ata, cost, M):
            bad.append(f"seed {seed}: symbolic successors differ at {w}")
    detail = f"{n} pairs, {len(bad)} unmatched ({time.time() - t:.0f}s)"
    return not bad, detail + ("; " + bad[0] if bad else "")


# ------------------------------------------------------------------ 10: complexity claims


def criterion_10():
    # not measurable; what is checkable is that both procedures terminate with a verdict on the corpora
    rows = wmtl_corpus_results()
    ok = all(r[2] is not None for r in rows)
    return ok, (f"complexity bounds are not measurable; decide_exists terminated on all {len(rows)} corpus runs "
                f"(max {max(r[5] for r in rows)} nodes), labelling terminates by construction")


CRITERIA = {1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
            6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10}


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, detail = CRITERIA[n]()
    record(n, ok, detail)
    assert ok, detail


if __name__ == "__main__":
    for n, fn in CRITERIA.items():
        ok, detail = fn()
        print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}", flush=True)
