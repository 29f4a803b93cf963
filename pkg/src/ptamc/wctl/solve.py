"""Cost fixpoints over a cost graph and exact start-state solving.

Two backward propagations are used.  ``back_costs`` computes, per node, the
saturated set of costs of the remaining path to an exit.  ``need_sets``
propagates acceptable arrival costs (a set of costs-so-far from which the
goal is still reachable).  Start states inside an open region are solved by
Fourier-Motzkin elimination with the clock value x kept symbolic.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

from ..intervals import (IntervalSet, constraint_set, minkowski_sum, saturate, shift,
                         subtract_clamped)
from ..linsys import System
from .costgraph import CostGraph


def reverse_edges(g: CostGraph) -> dict:
    rev = {}
    for src, outs in g.edges.items():
        for dst, lab, _ in outs:
            rev.setdefault(dst, []).append((src, lab))
    return rev


def back_costs(g: CostGraph, exits: dict, cap) -> dict:
    """node -> saturated costs of paths node ~> exit (exit cost included)."""
    rev = reverse_edges(g)
    back = {n: saturate(v, cap) for n, v in exits.items() if v}
    work = deque(back)
    queued = set(back)
    while work:
        m = work.popleft()
        queued.discard(m)
        bm = back[m]
        for n, lab in rev.get(m, ()):
            cand = saturate(minkowski_sum(lab, bm), cap)
            old = back.get(n, IntervalSet.empty())
            new = old.union(cand)
            if new != old:
                back[n] = new
                if n not in queued:
                    queued.add(n)
                    work.append(n)
    return back


def need_sets(g: CostGraph, init: dict) -> dict:
    """Least fixpoint of Need[n] = init[n] u U_{n -L-> m} (Need[m] - L) clamped at 0."""
    rev = reverse_edges(g)
    need = {n: v for n, v in init.items() if v}
    work = deque(need)
    queued = set(need)
    while work:
        m = work.popleft()
        queued.discard(m)
        nm = need[m]
        for n, lab in rev.get(m, ()):
            cand = subtract_clamped(nm, lab)
            if not cand:
                continue
            old = need.get(n, IntervalSet.empty())
            new = old.union(cand)
            if new != old:
                need[n] = new
                if n not in queued:
                    queued.add(n)
                    work.append(n)
    return need


def accept_from_back(back: IntervalSet, op: str, c) -> IntervalSet:
    """Arrival costs v such that v + b meets ``op c`` for some remaining cost b."""
    return subtract_clamped(constraint_set(op, c), back)


def _x_set_for(se, part, r, J) -> IntervalSet:
    """Clock values x in open region r whose source label meets the interval J."""
    region = part.intervals[r]
    if se.kind in ("point", "top") or (se.kind == "open" and se.M == 0):
        lab = se.at(part, r, part.sample(r))
        return IntervalSet([region]) if lab.intersect(IntervalSet([J])) else IntervalSet.empty()
    b = part.upper(r)
    s = System().bound("x", region).bound("v", J)
    # t = b - x
    if se.kind == "milestone":
        s.ge({"v": 1, "x": se.m, 1: -se.m * b}, 0, strict=not se.lo_closed)
        s.le({"v": 1, "x": se.M, 1: -se.M * b}, 0, strict=not se.hi_closed)
    else:
        s.ge({"v": 1}, 0)
        s.lt({"v": 1, "x": se.M, 1: -se.M * b}, 0)
    return s.project("x")


def solve_start(g: CostGraph, q: str, r: int, accept: dict) -> IntervalSet:
    """Clock values x in region r from which some source edge meets accept[target]."""
    part = g.part
    if not g.inv_ok(q, r):
        return IntervalSet.empty()
    if r % 2 == 0:
        return IntervalSet([part.intervals[r]]) if Fraction(0) in accept.get((q, r), IntervalSet.empty()) \
            else IntervalSet.empty()
    out = IntervalSet.empty()
    region = IntervalSet([part.intervals[r]])
    for se in g.source_edges(q, r):
        acc = accept.get(se.target)
        if not acc:
            continue
        for J in acc:
            out = out.union(_x_set_for(se, part, r, J))
            if out == region:
                return out
    return out


def exit_shift(offset: dict, q2: str):
    return Fraction(offset.get(q2, 0)) if offset else Fraction(0)


__all__ = ["back_costs", "need_sets", "accept_from_back", "solve_start", "shift"]
