"""Bottom-up labeling of WCTL formulas with exact satisfaction sets.

Positions are the states reached after mixed moves (delay then edge), so an
until is witnessed by a state entered by a discrete move (never by the
starting state), and runs are infinite: a location without enabled edges has
no run at all.  ``live`` is the set of states with at least one infinite run.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..intervals import IntervalSet
from ..model import OneClockPTA
from ..regions import Partition, RegionGraph
from ..syntax import (AU, CAN_HAVE_NOT_PAID, EG, EGFalse, EU, HAS_PAID, Atom, Const, FormulaError, Not, Or,
                      cost_names, parse_formula, resolve_costs)
from .costgraph import CostGraph, needs_unfolding
from .decisive import Decisive
from .rewrite import rewrite
from .satmap import SatMap, partition_for
from .solve import accept_from_back, back_costs, solve_start
from .unfold import move_cost_possibilities, unfold_discrete

log = logging.getLogger("ptamc.wctl")
if os.environ.get("PTAMC_TRACE"):
    logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s")


@dataclass
class Stats:
    graphs: int = 0
    nodes: int = 0
    edges: int = 0
    unfoldings: int = 0
    subformulas: int = 0
    extra: dict = field(default_factory=dict)


@dataclass
class _Instance:
    """The automaton a cost procedure runs on (possibly the discrete-cost unfolding)."""

    pta: OneClockPTA
    offset: dict
    origin: dict

    def lift(self, sm: SatMap) -> SatMap:
        return SatMap({q: sm[self.origin[q]] for q in self.pta.locations})

    def lower(self, sm: SatMap, base: OneClockPTA) -> SatMap:
        out = SatMap.empty(base)
        for q in self.pta.locations:
            if self.offset.get(q, 0) == 0:
                out[self.origin[q]] = sm[q]
        return out


def _paid_split(f):
    """chi when f is the literal conjunction has_paid & chi, else None."""
    if isinstance(f, Not) and isinstance(f.arg, Or):
        a = f.arg.left
        if isinstance(a, Not) and isinstance(a.arg, Atom) and a.arg.name == HAS_PAID:
            b = f.arg.right
            return b.arg if isinstance(b, Not) else Not(b)
    return None


class Labeler:
    """Computes satisfaction maps of core formulas on one automaton."""

    def __init__(self, pta: OneClockPTA):
        self.pta = pta
        self.stats = Stats()
        self._memo = {}
        self._rg = {}
        self._live = {}

    # ------------------------------------------------------------ regions

    def region_graph(self, part: Partition, pta=None) -> RegionGraph:
        pta = pta or self.pta
        key = (id(pta), part.constants)
        if key not in self._rg:
            self._rg[key] = (pta, RegionGraph(pta, part))
        return self._rg[key][1]

    def live_nodes(self, part: Partition, pta=None) -> set:
        pta = pta or self.pta
        key = (id(pta), part.constants)
        if key not in self._live:
            rg = self.region_graph(part, pta)
            succ = _succ(rg)
            self._live[key] = (pta, rg.gfp(rg.nodes(), lambda n: succ[n]))
        return self._live[key][1]

    def live(self, pta=None) -> SatMap:
        pta = pta or self.pta
        part = pta.classical()
        return SatMap.from_nodes(pta, part, self.live_nodes(part, pta))

    # ------------------------------------------------------------ dispatch

    def sat(self, f) -> SatMap:
        if f in self._memo:
            return self._memo[f]
        self.stats.subformulas += 1
        out = self._sat(f)
        log.debug("sat %s -> %s", f, out.render())
        self._memo[f] = out
        return out

    def _sat(self, f) -> SatMap:
        pta = self.pta
        if isinstance(f, Const):
            return SatMap.full(pta) if f.value else SatMap.empty(pta)
        if isinstance(f, Atom):
            if f.name in (HAS_PAID, CAN_HAVE_NOT_PAID):
                raise FormulaError(f"{f.name} is only supported inside the internal rewrite patterns")
            return SatMap({q: IntervalSet.nonneg() if f.name in pta.labels[q] else IntervalSet.empty()
                           for q in pta.locations})
        if isinstance(f, Not):
            return self.sat(f.arg).complement()
        if isinstance(f, Or):
            return self.sat(f.left).union(self.sat(f.right))
        if isinstance(f, EG):
            if isinstance(f.arg, Atom) and f.arg.name == CAN_HAVE_NOT_PAID:
                return self.zero_cost_forever(f.arg.cost)
            return self.eg(self.sat(f.arg))
        if isinstance(f, EGFalse):
            if f.op == ">=":
                return self.eg_geq_false(f.cost, f.c)
            if f.op == "=":
                return self.eg_eq_false(f.cost, f.c)
            raise FormulaError(f"E G{{{f.op}{f.c}}} false must be rewritten first")
        if type(f) is AU:
            if f.constrained:
                raise FormulaError("constrained A U must be rewritten first")
            return self.au(self.sat(f.left), self.sat(f.right))
        if isinstance(f, EU):
            if isinstance(f.right, Atom) and f.right.name == HAS_PAID and not f.constrained:
                return self.until_paid(self.sat(f.left), f.right.cost)
            chi = _paid_split(f.right)
            if chi is not None and f.op == "=" and f.left == Const(True):
                return self.paid_exactly(self.sat(chi), f.cost, f.c)
            s1, s2 = self.sat(f.left), self.sat(f.right)
            if not f.constrained:
                return self.eu(s1, s2)
            return self.eu_label(s1, s2, f.cost, f.op, f.c)
        raise FormulaError(f"cannot label {f!r}")

    # ------------------------------------------------------------ unconstrained

    def _setup(self, *maps):
        part = partition_for(self.pta, *maps)
        rg = self.region_graph(part)
        return part, rg, _succ(rg), self.live_nodes(part)

    def eu(self, s1: SatMap, s2: SatMap) -> SatMap:
        part, rg, succ, live = self._setup(s1, s2)
        target = s2.nodes(part) & live
        w = rg.lfp_backward(target, s1.nodes(part), lambda n: succ[n])
        res = {n for n in rg.nodes() if succ[n] & w}
        return SatMap.from_nodes(self.pta, part, res)

    def eg(self, s: SatMap) -> SatMap:
        part, rg, succ, live = self._setup(s)
        z = rg.gfp(s.nodes(part) & live, lambda n: succ[n])
        res = {n for n in rg.nodes() if succ[n] & z}
        return SatMap.from_nodes(self.pta, part, res)

    def au(self, s1: SatMap, s2: SatMap) -> SatMap:
        """A f U g  ==  !(E G !g  |  E !g U (!f & !g))."""
        n1, n2 = s1.complement(), s2.complement()
        bad = self.eg(n2).union(self.eu(n2, n1.intersect(n2)))
        return bad.complement()

    def until_paid(self, s: SatMap, cost_name) -> SatMap:
        """E s U has_paid: a positive-cost move into live after moves into s."""
        cost = self.pta.cost(cost_name)
        part, rg, succ, live = self._setup(s)
        inner = s.nodes(part)
        res = set()
        pos = {}
        for n in rg.nodes():
            q, r = n
            pos[n] = any(move_cost_possibilities(rg, cost, q, r, sr, e)[1] and (q2, r2) in live
                         for sr, e, q2, r2 in rg.mixed_successors(q, r))
            if pos[n]:
                res.add(n)
        changed = True
        while changed:
            changed = False
            for n in rg.nodes():
                if n not in res and any(m in res and m in inner for m in succ[n]):
                    res.add(n)
                    changed = True
        return SatMap.from_nodes(self.pta, part, res)

    def zero_cost_forever(self, cost_name) -> SatMap:
        """States with an infinite run whose every move costs nothing."""
        return self._cheap_forever(cost_name, tiny=False)

    def small_cost_forever(self, cost_name) -> SatMap:
        """States with infinite runs of arbitrarily small total cost."""
        return self._cheap_forever(cost_name, tiny=True)

    def _cheap_forever(self, cost_name, tiny: bool) -> SatMap:
        cost = self.pta.cost(cost_name)
        part = self.pta.classical()
        rg = self.region_graph(part)
        succ = {}
        for q, r in rg.nodes():
            outs = set()
            for s, e, q2, r2 in rg.mixed_successors(q, r):
                if cost.discrete[e]:
                    continue
                if cost.rate[q] == 0 or s == r or (tiny and r % 2 == 0 and s == r + 1):
                    outs.add((q2, r2))
            succ[(q, r)] = outs
        z = rg.gfp(rg.nodes(), lambda n: succ[n])
        return SatMap.from_nodes(self.pta, part, z)

    # ------------------------------------------------------------ constrained

    def instance(self, cost, c) -> _Instance:
        pta = self.pta
        if needs_unfolding(pta, cost):
            self.stats.unfoldings += 1
            unf = unfold_discrete(pta, int(c), cost.name, only_interior=True)
            return _Instance(unf.pta, unf.offset, unf.origin)
        return _Instance(pta, {}, {q: q for q in pta.locations})

    def cost_graph(self, inst: _Instance, part: Partition, cost_name, allowed_nodes=None) -> CostGraph:
        allowed = None if allowed_nodes is None else (lambda q, r: (q, r) in allowed_nodes)
        g = CostGraph(inst.pta, part, inst.pta.cost(cost_name), allowed)
        st = g.stats()
        self.stats.graphs += 1
        self.stats.nodes += st["nodes"]
        self.stats.edges += st["edges"]
        return g

    def eu_graph(self, s1: SatMap, s2: SatMap, cost_name, c):
        """Instance, cost graph and exit moves {node: [(edge, cost)]} of a constrained until.

        The exit cost includes the copy index of the landing location, which
        carries the discrete costs absorbed by the unfolding.
        """
        cost = self.pta.cost(cost_name)
        inst = self.instance(cost, c)
        l1, l2 = inst.lift(s1), inst.lift(s2)
        part = partition_for(inst.pta, l1, l2)
        live = self.live_nodes(part, inst.pta)
        g = self.cost_graph(inst, part, cost.name, l1.nodes(part))
        target = l2.nodes(part) & live
        exits = {}
        for q, r in g.nodes():
            for e in inst.pta.out_edges[q]:
                t = g.rg.edge_targets(e, r)
                q2 = inst.pta.edges[e].target
                if t is not None and (q2, t) in target:
                    v = Fraction(g.cost.discrete[e] + inst.offset.get(q2, 0))
                    exits.setdefault((q, r), []).append((e, v))
        return inst, g, exits

    def eu_label(self, s1: SatMap, s2: SatMap, cost_name, op: str, c) -> SatMap:
        """E s1 U{op c} s2 through the cost graph."""
        inst, g, exits = self.eu_graph(s1, s2, cost_name, c)
        exit_sets = {n: IntervalSet([_pt(v) for _, v in moves]) for n, moves in exits.items()}
        back = back_costs(g, exit_sets, Fraction(c) + 1)
        accept = {n: accept_from_back(b, op, c) for n, b in back.items()}
        res = SatMap.empty(inst.pta)
        for q in inst.pta.locations:
            if inst.offset.get(q, 0):
                continue
            sets = [solve_start(g, q, r, accept) for r in range(g.part.count)]
            res[q] = IntervalSet([iv for s in sets for iv in s])
        return inst.lower(res, self.pta)

    def eg_geq_false(self, cost_name, c) -> SatMap:
        """E G{>=c} false: a path of cost < c into states with arbitrarily cheap infinite runs."""
        if c <= 0:
            return SatMap.empty(self.pta)
        s0 = self.small_cost_forever(cost_name)
        reach = self.eu_label(SatMap.full(self.pta), s0, cost_name, "<", c)
        return s0.union(reach)

    def eg_eq_false(self, cost_name, c) -> SatMap:
        """E G{=c} false: never at cost exactly c at a position after the start."""
        cost = self.pta.cost(cost_name)
        if c == 0:
            part = self.pta.classical()
            rg = self.region_graph(part)
            live = self.live_nodes(part)
            res = {(q, r) for q, r in rg.nodes()
                   if any(move_cost_possibilities(rg, cost, q, r, s, e)[1] and (q2, r2) in live
                          for s, e, q2, r2 in rg.mixed_successors(q, r))}
            return SatMap.from_nodes(self.pta, part, res)
        inst = self.instance(cost, c)
        jump = self._decisive(inst, cost.name, self.live(inst.pta), "jump", c)
        return self.eg_geq_false(cost_name, c).union(jump)

    def paid_exactly(self, chi: SatMap, cost_name, c) -> SatMap:
        """E F{=c} (has_paid & chi): a positive-cost move reaching exactly c into chi."""
        cost = self.pta.cost(cost_name)
        inst = self.instance(cost, c)
        ok = inst.lift(chi).intersect(self.live(inst.pta))
        return self._decisive(inst, cost.name, ok, "paid", c)

    def _decisive(self, inst: _Instance, cost_name, ok: SatMap, mode: str, c) -> SatMap:
        part = partition_for(inst.pta, ok)
        g = self.cost_graph(inst, part, cost_name)
        d = Decisive(g, ok, mode, c, inst.offset)
        res = SatMap.empty(inst.pta)
        for q in inst.pta.locations:
            if inst.offset.get(q, 0):
                continue
            sets = [d.start_set(q, r) for r in range(part.count)]
            res[q] = IntervalSet([iv for s in sets for iv in s])
        return inst.lower(res, self.pta)


def _pt(v):
    from ..intervals import Interval

    return Interval.point(v)


def _succ(rg: RegionGraph) -> dict:
    return {(q, r): {(q2, r2) for _, _, q2, r2 in rg.mixed_successors(q, r)} for q, r in rg.nodes()}


# ---------------------------------------------------------------- top level


@dataclass
class CheckResult:
    formula: object
    core: object
    sat: SatMap
    holds: bool
    stats: Stats


def prepare(pta: OneClockPTA, formula, logic="wctl"):
    f = parse_formula(formula, logic) if isinstance(formula, str) else formula
    default = pta.costs[0].name if len(pta.costs) == 1 else None
    f = resolve_costs(f, default)
    for name in cost_names(f):
        if name is None:
            raise FormulaError("the model has several costs; name one in every constraint")
        if not pta.has_cost(name):
            raise FormulaError(f"unknown cost {name!r}")
    return f


def check(pta: OneClockPTA, formula, state: Optional[tuple] = None, labeler: Labeler = None) -> CheckResult:
    """Label ``formula`` on ``pta`` and evaluate it at ``state`` (default: initial, x=0)."""
    f = prepare(pta, formula)
    core = rewrite(f)
    lab = labeler or Labeler(pta)
    sm = lab.sat(core)
    q, x = state if state is not None else (pta.initial, 0)
    return CheckResult(f, core, sm, sm.holds(q, x), lab.stats)


def holds(pta: OneClockPTA, formula, q=None, x=0) -> bool:
    return check(pta, formula, (q or pta.initial, Fraction(x))).holds
