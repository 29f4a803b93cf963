"""Two-counter machine gadgets: a one-clock automaton with one cost and a linear formula.

Counter values (c1, c2) are stored in the clock as 2^-c1 * 3^-c2.  Every
instruction becomes a module; the formula forces the delays that make each
module divide, test or restore the clock exactly.  Rates reach 3, so the
result lies outside the decidable fragment: these are corpus inputs, never
something the linear engine is expected to decide.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..model import build


@dataclass(frozen=True)
class Inc:
    counter: int  # 1 or 2
    goto: int


@dataclass(frozen=True)
class Dec:
    """if (c == 0) goto if_zero else c := c - 1; goto otherwise."""

    counter: int
    if_zero: int
    otherwise: int


@dataclass(frozen=True)
class Halt:
    pass


Instruction = Union[Inc, Dec, Halt]


@dataclass(frozen=True)
class TwoCounterMachine:
    instructions: tuple

    def __post_init__(self):
        n = len(self.instructions)
        halts = [i for i, ins in enumerate(self.instructions) if isinstance(ins, Halt)]
        if len(halts) != 1:
            raise ValueError("a machine has exactly one halt instruction")
        for i, ins in enumerate(self.instructions):
            targets = {Inc: lambda s: [s.goto], Dec: lambda s: [s.if_zero, s.otherwise],
                       Halt: lambda s: []}[type(ins)](ins)
            if any(not 0 <= t < n for t in targets):
                raise ValueError(f"instruction {i} jumps outside the program")
            if not isinstance(ins, Halt) and ins.counter not in (1, 2):
                raise ValueError(f"instruction {i}: counters are 1 and 2")

    def run(self, max_steps: int = 1000):
        """Concrete execution: list of (pc, c1, c2) until halt or the step bound."""
        pc, c = 0, [0, 0, 0]
        trace = [(pc, 0, 0)]
        for _ in range(max_steps):
            ins = self.instructions[pc]
            if isinstance(ins, Halt):
                break
            if isinstance(ins, Inc):
                c[ins.counter] += 1
                pc = ins.goto
            elif c[ins.counter] == 0:
                pc = ins.if_zero
            else:
                c[ins.counter] -= 1
                pc = ins.otherwise
            trace.append((pc, c[1], c[2]))
        return trace


def _name(i, part):
    return f"m{i}.{part}"


def _incr(i, counter):
    rates = {"A": 1, "B": 1, "C": 2 if counter == 1 else 3, "D": 1}
    locs = [{"name": _name(i, p), "labels": [p, "incr"], "rate": r} for p, r in rates.items()]
    edges = [
        {"from": _name(i, "A"), "to": _name(i, "B"), "guard": "x<=1"},
        {"from": _name(i, "B"), "to": _name(i, "C"), "guard": "x==1", "reset": True},
        {"from": _name(i, "C"), "to": _name(i, "D"), "cost": 2},
    ]
    return locs, edges, _name(i, "A"), [(_name(i, "D"), None)]


_DECR_RATES = {"A0": 1, "B0": 3, "C0": 1, "A": 1, "B": 3, "C": 1, "C'": 1, "D": 1, "E1": 3, "E2": 3,
               "F1": 1, "F2": 1, "G1": 3, "G2": 3, "H1": 1, "H2": 1, "A2": 1, "B2": 2, "C2": 1, "D2": 1}


def _decr(i, counter):
    rates = dict(_DECR_RATES)
    bump = {}
    if counter == 1:
        bump[("C2", "D2")] = 1
    else:
        for p in ("B0", "B", "E1", "E2", "G1", "G2"):
            rates[p] = 2
        rates["B2"] = 3
        for pair in (("C", "D"), ("G1", "H1"), ("G2", "H2")):
            bump[pair] = 1
    locs = [{"name": _name(i, p), "labels": [p, "decr"], "rate": r} for p, r in rates.items()]
    spec = [("A0", "B0", "x<1", False), ("B0", "C0", "x==1", True), ("C0", "C", None, False),
            ("C", "D", None, False), ("D", "A", "x<1", False), ("A", "B", None, False),
            ("B", "C", "x==1", True), ("C", "C'", None, False), ("C'", "C", None, False),
            ("D", "E1", "x==1", True), ("D", "E2", "x>1", True), ("E1", "F1", None, False),
            ("E2", "F2", None, False), ("F1", "G1", None, True), ("F2", "G2", None, True),
            ("G1", "H1", None, False), ("G2", "H2", None, False), ("H2", "A2", None, False),
            ("A2", "B2", None, False), ("B2", "C2", "x==1", True), ("C2", "D2", None, False)]
    edges = []
    for a, b, g, r in spec:
        e = {"from": _name(i, a), "to": _name(i, b), "reset": r, "cost": bump.get((a, b), 0)}
        if g:
            e["guard"] = g
        edges.append(e)
    # exits: (source location, extra guard) to if_zero via H1 and the x=1 shortcut, to otherwise via D2
    return locs, edges, _name(i, "A0"), [(_name(i, "H1"), None), (_name(i, "A0"), "x==1"),
                                         (_name(i, "D2"), None)]


ZERO_TIME = ("A", "D", "A0", "C0", "C'", "F1", "F2", "H1", "H2", "A2", "D2")


def zero(p: str) -> str:
    """No time elapses in a p-labelled state (all rates are positive)."""
    return f"G({p} => ({p} U{{=0}} !{p}))"


def phi1() -> str:
    return " & ".join(zero(p) for p in ZERO_TIME)


def phi2(has_incr: bool, has_decr: bool) -> str:
    """Cost-3 segment conditions of the modules.

    Decrement modules: every A/A0 -> D, C0/C' -> C'/F and D -> H segment costs
    3, imposed at the entry position too (until is strict here), with the
    x=1 shortcut out of A0 allowed.  Increment modules: the A -> D segment
    costs 3.
    """
    parts = []
    if has_incr:
        parts.append("G((A & incr) => (!D U{=3} D))")
    if has_decr:
        def branch(f, h, extra=""):
            body = (f"((A | A0) => (!D U{{=3}} D)) & "
                    f"((C0 | C') => (!(C' | {f}) U{{=3}} (C' | {f}))) & "
                    f"((D & (!D U {h})) => (!{h} U{{=3}} {h})){extra}")
            return f"(({body}) & (({body}) U {h}))"
        left = branch("F1", "H1")
        right = branch("F2", "H2", " & (H2 => (!D2 U{=3} D2))")
        # "false U p" reads "the next position satisfies p": the x=1 shortcut out of A0
        parts.append(f"G((A0 & decr) => ((false U !B0) | {left} | {right}))")
    return " & ".join(parts) if parts else "true"


def gen_2cm_gadgets(m: TwoCounterMachine):
    """(automaton, formula text).  The machine halts iff some run satisfies the formula."""
    locs = [{"name": "init", "labels": ["init"], "rate": 1, "invariant": "x<=1"}]
    edges = []
    entry, exits = {}, {}
    for i, ins in enumerate(m.instructions):
        if isinstance(ins, Halt):
            locs.append({"name": _name(i, "Halt"), "labels": ["Halt"], "rate": 1})
            edges.append({"from": _name(i, "Halt"), "to": _name(i, "Halt")})
            entry[i] = _name(i, "Halt")
            continue
        ls, es, ent, ex = (_incr if isinstance(ins, Inc) else _decr)(i, ins.counter)
        locs += ls
        edges += es
        entry[i] = ent
        exits[i] = ex
    for i, ins in enumerate(m.instructions):
        if isinstance(ins, Inc):
            edges.append({"from": exits[i][0][0], "to": entry[ins.goto], "guard": "x<=1"})
        elif isinstance(ins, Dec):
            (h1, _), (a0, g1), (d2, _) = exits[i]
            edges.append({"from": h1, "to": entry[ins.if_zero], "guard": "x<=1"})
            edges.append({"from": a0, "to": entry[ins.if_zero], "guard": g1})
            edges.append({"from": d2, "to": entry[ins.otherwise], "guard": "x<=1"})
    edges.append({"from": "init", "to": entry[0], "guard": "x==1"})
    pta = build(locs, edges, initial="init", check_blocking=False)
    has_incr = any(isinstance(s, Inc) for s in m.instructions)
    has_decr = any(isinstance(s, Dec) for s in m.instructions)
    formula = f"{phi1()} & {phi2(has_incr, has_decr)} & F Halt"
    return pta, formula


def _edge(pta, src, dst, x):
    for k in pta.out_edges[src]:
        e = pta.edges[k]
        if e.target == dst and x in e.guard:
            return k
    raise ValueError(f"no edge {src} -> {dst} at x={x}")


def simulate(m: TwoCounterMachine, pta, max_steps: int = 50):
    """The intended run of the gadget automaton for the machine's execution.

    Returns (states, moves) with states[k] = (location, clock) and
    moves[k] = (delay, edge index), the shape accepted by ``holds_on_run``.
    """
    from fractions import Fraction

    states = [("init", Fraction(0))]
    moves = []

    def go(dst, d):
        q, x = states[-1]
        y = x + d
        k = _edge(pta, q, dst, y)
        moves.append((Fraction(d), k))
        states.append((dst, Fraction(0) if pta.edges[k].reset else y))

    go(_name(0, _entry_part(m.instructions[0])), 1)
    trace = m.run(max_steps)
    for (pc, _, _), (nxt, _, _) in zip(trace, trace[1:]):
        ins = m.instructions[pc]
        x0 = states[-1][1]
        n = lambda p: _name(pc, p)
        target = _name(nxt, _entry_part(m.instructions[nxt]))
        if isinstance(ins, Inc):
            go(n("B"), 0)
            go(n("C"), 1 - x0)
            go(n("D"), x0 / (2 if ins.counter == 1 else 3))
            go(target, 0)
            continue
        if x0 == 1:
            go(target, 0)
            continue
        mult = 3 if ins.counter == 1 else 2
        go(n("B0"), 0)
        go(n("C0"), 1 - x0)
        go(n("C"), 0)
        go(n("D"), mult * x0)
        k = 1
        while states[-1][1] < 1:
            k += 1
            x = states[-1][1]
            go(n("A"), 0)
            go(n("B"), 0)
            go(n("C"), 1 - x)
            go(n("C'"), (mult ** k - mult) * x0)
            go(n("C"), 0)
            go(n("D"), mult * x0)
        side = "1" if states[-1][1] == 1 else "2"
        go(n("E" + side), 0)
        go(n("F" + side), 1 - x0)
        go(n("G" + side), 0)
        go(n("H" + side), x0)
        if side == "1":
            go(target, 0)
        else:
            go(n("A2"), 0)
            go(n("B2"), 0)
            go(n("C2"), 1 - x0)
            go(n("D2"), x0 * (2 if ins.counter == 1 else 3))
            go(target, 0)
    return states, moves


def _entry_part(ins):
    return {Inc: "A", Dec: "A0", Halt: "Halt"}[type(ins)]
