"""Discrete-cost unfolding and the move-flag extension."""

from __future__ import annotations

from dataclasses import dataclass

from ..model import CostFunction, Edge, OneClockPTA
from ..regions import Partition, RegionGraph


def copy_name(q: str, i: int) -> str:
    return f"{q}#{i}"


@dataclass
class Unfolded:
    pta: OneClockPTA
    offset: dict  # location -> copy index
    origin: dict  # location -> original location


def unfold_discrete(pta: OneClockPTA, c: int, cost_name=None, *, only_interior=False) -> Unfolded:
    """Copies 0..c+1 of pta; a costly edge moves from copy i to copy min(i+k, c+1).

    The moved edges lose their discrete cost for ``cost_name`` (it is now
    encoded by the copy index); every copy location carries ``copy_i``.
    With ``only_interior`` only costly non-resetting edges with a
    non-punctual guard are moved; the others keep their cost as a shift.
    """
    cost = pta.cost(cost_name)
    top = c + 1
    locs, labels, inv, offset, origin = [], {}, {}, {}, {}
    for i in range(top + 1):
        for q in pta.locations:
            n = copy_name(q, i)
            locs.append(n)
            labels[n] = pta.labels[q] | {f"copy_{i}"}
            inv[n] = pta.invariant[q]
            offset[n] = i
            origin[n] = q
    edges, disc = [], {cf.name: [] for cf in pta.costs}
    for i in range(top + 1):
        for k, e in enumerate(pta.edges):
            d = cost.discrete[k]
            moved = d > 0 and (not only_interior or (not e.reset and not e.guard.interval.is_point()))
            j = min(i + d, top) if moved else i
            edges.append(Edge(copy_name(e.source, i), e.guard, e.reset, copy_name(e.target, j)))
            for cf in pta.costs:
                disc[cf.name].append(0 if (moved and cf.name == cost.name) else cf.discrete[k])
    costs = tuple(
        CostFunction(cf.name, {n: cf.rate[origin[n]] for n in locs}, tuple(disc[cf.name])) for cf in pta.costs
    )
    out = OneClockPTA(tuple(locs), labels, copy_name(pta.initial, 0), tuple(edges), inv, costs)
    return Unfolded(out, offset, origin)


@dataclass
class ExtAutomaton:
    """Region automaton with last-move flags.

    Nodes are ``(location, region, flag)`` with flag in {"has_paid",
    "can_have_not_paid", "init"}; a move may land in the has_paid copy when
    it can have positive cost and in the can_have_not_paid copy when it can
    have zero cost.
    """

    pta: OneClockPTA
    part: Partition
    cost: CostFunction
    succ: dict

    def labels(self, node) -> set:
        q, r, flag = node
        return set(self.pta.labels[q]) | ({flag} if flag != "init" else set())


def move_cost_possibilities(rg: RegionGraph, cost: CostFunction, q, r, s, e):
    """(can be zero, can be positive) for the mixed move delaying r->s then firing e."""
    rate = cost.rate[q]
    disc = cost.discrete[e]
    if disc > 0:
        return False, True
    if rate == 0:
        return True, False
    if s != r:
        return False, True
    # staying inside the region: zero delay always works, a positive one only in open regions
    return True, r % 2 == 1


def build_ext(pta: OneClockPTA, part: Partition = None, cost_name=None) -> ExtAutomaton:
    part = part or pta.classical()
    cost = pta.cost(cost_name)
    rg = RegionGraph(pta, part)
    succ = {}
    for q, r in rg.nodes():
        outs = set()
        for s, e, q2, r2 in rg.mixed_successors(q, r):
            zero, pos = move_cost_possibilities(rg, cost, q, r, s, e)
            if pos:
                outs.add((q2, r2, "has_paid"))
            if zero:
                outs.add((q2, r2, "can_have_not_paid"))
        for flag in ("init", "has_paid", "can_have_not_paid"):
            succ[(q, r, flag)] = outs
    return ExtAutomaton(pta, part, cost, succ)
