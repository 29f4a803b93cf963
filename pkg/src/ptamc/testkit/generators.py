"""Model generators: the repair example, the binary-granularity family and random models."""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..model import OneClockPTA, build
from ..syntax import EF, EU, Atom, Not, Or, TRUE, conj


def gen_repair() -> OneClockPTA:
    """The repair process: OK -> Problem -> Cheap | Expensive -> OK.

    Cheap uses the invariant x<=20 so that its x=20 exit is reachable.
    """
    locations = [
        {"name": "OK", "invariant": "x<=9", "rate": 0},
        {"name": "Problem", "invariant": "x<=10", "rate": 3},
        {"name": "Cheap", "invariant": "x<=20", "rate": 2},
        {"name": "Expensive", "invariant": "x<=15", "rate": 4},
    ]
    edges = [
        {"from": "OK", "to": "Problem"},
        {"from": "Problem", "to": "Cheap", "guard": "x>=2"},
        {"from": "Problem", "to": "Expensive", "guard": "x>=4"},
        {"from": "Cheap", "to": "OK", "guard": "x=20", "reset": True, "cost": 5},
        {"from": "Expensive", "to": "OK", "guard": "x=15", "reset": True},
    ]
    return build(locations, edges, initial="OK")


def binary_step(x_formula):
    """phi(X) = E((a | b) U{=0} (!a & E(!b U{=4} (b & X))))."""
    inner = EU(Not(Atom("b")), conj(Atom("b"), x_formula), None, "=", 4)
    return EU(Or(Atom("a"), Atom("b")), conj(Not(Atom("a")), inner), None, "=", 0)


def gen_binary(n: int):
    """The halving automaton and the n-fold nested formula.

    Leaving ``a`` with x = x0 and paying exactly 4 until ``b`` doubles x
    modulo 1, so the formula holds at (a, x) iff x = p/2^(n-1) with p < 2^n.
    ``c`` carries a zero-cost self-loop so that reaching it starts an
    infinite run.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    locations = [
        {"name": "a", "rate": 1},
        {"name": "b1", "rate": 2, "labels": []},
        {"name": "b2", "rate": 4, "labels": []},
        {"name": "c1", "rate": 1, "labels": []},
        {"name": "c2", "rate": 2, "labels": []},
        {"name": "b", "rate": 1},
        {"name": "c", "rate": 1},
    ]
    edges = [
        {"from": "a", "to": "b1", "guard": "x<1"},
        {"from": "a", "to": "b2", "guard": "x>=1"},
        {"from": "b1", "to": "c1", "guard": "x=2", "reset": True},
        {"from": "b2", "to": "c2", "guard": "x=2", "reset": True},
        {"from": "c1", "to": "b", "guard": "x<2"},
        {"from": "c2", "to": "b", "guard": "x<2"},
        {"from": "b", "to": "c", "guard": "x=0"},
        {"from": "b", "to": "a"},
        {"from": "c", "to": "c"},
    ]
    pta = build(locations, edges, initial="a", costs=("p",))
    reach_c = EF(Atom("c"), None, "=", 0)
    f = binary_step(reach_c)
    for _ in range(n - 1):
        f = binary_step(Or(reach_c, f))
    return pta, f


@dataclass(frozen=True)
class RandomParams:
    locations: int = 3
    edges: int = 4
    max_constant: int = 2
    rates: tuple = (0, 1, 2)
    max_discrete: int = 0
    labels: tuple = ("a", "b")
    reset_prob: float = 0.4
    invariant_prob: float = 0.4


_OPS = ("<", "<=", "=", ">=", ">")


def _random_guard(rng: random.Random, m: int) -> str:
    if m == 0 or rng.random() < 0.3:
        return "true"
    kind = rng.choice(("lo", "hi", "both", "eq"))
    a = rng.randint(0, m)
    if kind == "eq":
        return f"x={a}"
    if kind == "lo":
        return f"x{rng.choice(('>', '>='))}{min(a, m - 1) if a == m else a}"
    if kind == "hi":
        return f"x{rng.choice(('<', '<='))}{max(a, 1)}"
    b = rng.randint(a + 1, m + 1) if a < m + 1 else a + 1
    return f"x>={a} & x<={b}"


def gen_random(params: RandomParams = RandomParams(), seed: int = 0) -> OneClockPTA:
    """Seeded random model; location l0 has a free self-loop and every location
    can reset back to it, so all states have infinite runs."""
    rng = random.Random(seed)
    m = params.max_constant
    names = [f"l{i}" for i in range(params.locations)]
    locations = []
    for i, q in enumerate(names):
        loc = {"name": q, "rate": rng.choice(params.rates),
               "labels": sorted(a for a in params.labels if rng.random() < 0.5)}
        if i > 0 and m > 0 and rng.random() < params.invariant_prob:
            loc["invariant"] = f"x{rng.choice(('<', '<='))}{rng.randint(1, m)}"
        locations.append(loc)
    edges = [{"from": names[0], "to": names[0]}]
    for q in names[1:]:
        edges.append({"from": q, "to": names[0], "reset": True,
                      "cost": rng.randint(0, params.max_discrete)})
    tries = 0
    while len(edges) < params.locations + params.edges and tries < 100 * (params.edges + 1):
        tries += 1
        e = {"from": rng.choice(names), "to": rng.choice(names), "guard": _random_guard(rng, m),
             "reset": rng.random() < params.reset_prob, "cost": rng.randint(0, params.max_discrete)}
        try:
            build(locations, edges + [e], initial=names[0], check_blocking=False)
        except Exception:
            continue
        edges.append(e)
    return build(locations, edges, initial=names[0])


def gen_formula(rng: random.Random, depth: int, labels=("a", "b"), cmax: int = 3, quantifiers="EA"):
    """Random WCTL formula text over the given labels."""
    if depth == 0 or rng.random() < 0.25:
        return rng.choice(labels + ("true",))
    k = rng.random()
    if k < 0.15:
        return f"!({gen_formula(rng, depth - 1, labels, cmax, quantifiers)})"
    if k < 0.3:
        a = gen_formula(rng, depth - 1, labels, cmax, quantifiers)
        b = gen_formula(rng, depth - 1, labels, cmax, quantifiers)
        return f"({a}) {rng.choice('|&')} ({b})"
    qf = rng.choice(quantifiers)
    cons = "" if rng.random() < 0.3 else "{" + rng.choice(_OPS) + str(rng.randint(0, cmax)) + "}"
    a = gen_formula(rng, depth - 1, labels, cmax, quantifiers)
    if rng.random() < 0.5:
        b = gen_formula(rng, depth - 1, labels, cmax, quantifiers)
        return f"{qf} ({a}) U{cons} ({b})"
    return f"{qf}{rng.choice('FG')}{cons} ({a})"
