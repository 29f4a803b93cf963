"""The interval-labelled cost graph over region milestones.

Nodes are ``(q, r)`` with ``r`` a region index of a :class:`Partition`:
even indices are the milestones ``{a_i}``, odd ones the open regions.
Start states ``(q, x)`` are not materialised; :meth:`CostGraph.source_edges`
returns their outgoing labels as linear functions of ``x``.

Inside an open region only zero-cost non-resetting edges are followed.
Resetting edges and edges fired exactly at a milestone carry their discrete
cost as an exact shift.  Costly non-resetting edges enabled on an open region
cannot be represented this way; :func:`needs_unfolding` detects them and the
labeler unfolds discrete costs first.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from ..intervals import Interval, IntervalSet, Linear, ParamInterval, scale_interval
from ..model import CostFunction, OneClockPTA
from ..rational import render
from ..regions import Partition, RegionGraph, interval_contains

Node = tuple  # (location, region index)


@dataclass(frozen=True)
class StripInfo:
    """Reachability summary of one open region for a (source set, target) pair.

    ``pieces`` are the achievable average cost rates over the crossed part of
    the region; several pieces appear when branches with different rates never
    meet on a common path.
    """

    cmin: int
    cmax: int
    lo_closed: bool
    hi_closed: bool
    pieces: tuple = ()

    def scaled(self, d) -> IntervalSet:
        """Costs of crossing a stretch of length d > 0."""
        return IntervalSet([iv for p in self.pieces for iv in scale_interval(p, d)])


@dataclass(frozen=True)
class SourceEdge:
    """Outgoing label of a start node (q, x, r), linear in t = a_{i+1} - x.

    The label is t*[m, M] with the given closures, or [0, t*M) for edges
    into the open region itself; ``unbounded`` marks [0, +inf).
    """

    target: Node
    kind: str  # "point", "milestone", "open", "top"
    m: int = 0
    M: int = 0
    lo_closed: bool = True
    hi_closed: bool = True

    def at(self, part: Partition, r: int, x) -> IntervalSet:
        if self.kind == "point":
            return IntervalSet.point(0)
        if self.kind == "top":
            return IntervalSet.point(0) if self.M == 0 else IntervalSet.nonneg()
        t = part.upper(r) - Fraction(x)
        if self.kind == "milestone":
            return IntervalSet.of(t * self.m, self.lo_closed, t * self.M, self.hi_closed)
        if self.M == 0:
            return IntervalSet.point(0)
        return IntervalSet.of(0, True, t * self.M, False)

    def param(self, part: Partition, r: int) -> Optional[ParamInterval]:
        """The label as a ParamInterval in the start clock value y = x."""
        if self.kind in ("point", "top"):
            return None
        b = part.upper(r)
        if self.kind == "milestone":
            return ParamInterval(Linear(b * self.m, -Fraction(self.m)), self.lo_closed,
                                 Linear(b * self.M, -Fraction(self.M)), self.hi_closed)
        return ParamInterval(Linear(Fraction(0)), True, Linear(b * self.M, -Fraction(self.M)), self.M == 0)


class CostGraph:
    def __init__(self, pta: OneClockPTA, part: Partition, cost: CostFunction,
                 allowed: Optional[Callable[[str, int], bool]] = None):
        self.pta = pta
        self.part = part
        self.cost = cost
        self.rg = RegionGraph(pta, part)
        self.allowed = allowed or (lambda q, r: True)
        self.rate = cost.rate
        self.edges: dict[Node, list] = {}  # node -> [(target, IntervalSet, kind)]
        self.strips: dict = {}
        self._interior = {}
        self._instant = {}
        self._source_cache = {}
        self._build()

    # -------------------------------------------------------------- helpers

    def inv_ok(self, q, r) -> bool:
        return self.rg.inv_ok(q, r)

    def lands(self, e: int, r: int) -> Optional[Node]:
        """Landing node of firing edge e from region r, honouring the filter."""
        t = self.rg.edge_targets(e, r)
        if t is None:
            return None
        q2 = self.pta.edges[e].target
        if not self.allowed(q2, t):
            return None
        return (q2, t)

    def nodes(self):
        return [(q, r) for q in self.pta.locations for r in range(self.part.count) if self.inv_ok(q, r)]

    def interior_adj(self, r: int) -> dict:
        """Zero-cost non-resetting moves usable anywhere in open region r."""
        if r not in self._interior:
            adj = {q: set() for q in self.pta.locations if self.inv_ok(q, r)}
            for i, e in enumerate(self.pta.edges):
                if e.reset or self.cost.discrete[i] or e.source not in adj:
                    continue
                land = self.lands(i, r)
                if land is not None:
                    adj[e.source].add(e.target)
            self._interior[r] = adj
        return self._interior[r]

    def instant_adj(self, p: int) -> dict:
        """Zero-cost non-resetting moves at milestone p."""
        if p not in self._instant:
            adj = {q: set() for q in self.pta.locations if self.inv_ok(q, p)}
            for i, e in enumerate(self.pta.edges):
                if e.reset or self.cost.discrete[i] or e.source not in adj:
                    continue
                land = self.lands(i, p)
                if land is not None:
                    adj[e.source].add(e.target)
            self._instant[p] = adj
        return self._instant[p]

    @staticmethod
    def closure(adj: dict, start) -> set:
        out = set(s for s in start if s in adj)
        stack = list(out)
        while stack:
            q = stack.pop()
            for t in adj.get(q, ()):
                if t not in out:
                    out.add(t)
                    stack.append(t)
        return out

    @staticmethod
    def coclosure(adj: dict, targets) -> set:
        rev = {q: set() for q in adj}
        for q, ts in adj.items():
            for t in ts:
                if t in rev:
                    rev[t].add(q)
        return CostGraph.closure(rev, targets)

    # -------------------------------------------------------------- strips

    def strip(self, r: int, starts: set, reach_from_starts: bool, end: str, target: str) -> Optional[StripInfo]:
        """Cost summary for crossing open region r.

        ``starts`` are locations that begin delaying at the left end (or at x).
        ``end`` is "right" (arrive at the right milestone in ``target``
        possibly after instant moves there), "inside" (be in ``target`` at some
        point of the region) or "at" (be in ``target`` at a fixed inner point).
        """
        adj = self.interior_adj(r)
        starts = {s for s in starts if s in adj}
        reach = self.closure(adj, starts)
        if end == "right":
            p = r + 1
            inst = self.instant_adj(p)
            pre = self.coclosure(inst, [target]) if target in inst else set()
            ends = {s for s in pre if s in adj and self.inv_ok(s, p)}
        elif end == "at":
            ends = self.coclosure(adj, [target]) if target in adj else set()
        else:
            ends = {target} if target in adj else set()
        co = self.coclosure(adj, ends)
        support = reach & co
        if not (reach & ends):
            return None
        rates = [self.rate[s] for s in support]
        cmin, cmax = min(rates), max(rates)
        first = reach if reach_from_starts else starts

        def attained(c):
            good_ends = {s for s in ends if self.rate[s] == c}
            for s0 in first & support:
                if self.rate[s0] != c:
                    continue
                if self.closure(adj, [s0]) & good_ends:
                    return True
            return False

        if end == "inside":
            zero_start = any(self.rate[s] == 0 and target in self.closure(adj, [s]) for s in first)
            lo_closed = zero_start or reach_from_starts
            piece = Interval.point(0) if cmax == 0 else Interval(0, lo_closed, cmax, False)
            return StripInfo(0, cmax, lo_closed, cmax == 0, (piece,))
        # open stretches between two rates met on one path, plus attained rates
        raw = [Interval.point(c) for c in set(rates) if attained(c)]
        for u in support:
            for v in self.closure(adj, [u]) & support:
                a, b = sorted((self.rate[u], self.rate[v]))
                if a < b:
                    raw.append(Interval(a, False, b, False))
        pieces = tuple(IntervalSet(raw))
        return StripInfo(cmin, cmax, attained(cmin), attained(cmax), pieces)

    # -------------------------------------------------------------- building

    def _add(self, src: Node, dst: Node, label: IntervalSet, kind: str):
        if label:
            self.edges.setdefault(src, []).append((dst, label, kind))

    def _build(self):
        part, pta = self.part, self.pta
        for q, r in self.nodes():
            # resetting edges from points and open regions
            for e in pta.out_edges[q]:
                if not pta.edges[e].reset:
                    continue
                land = self.lands(e, r)
                if land is not None:
                    self._add((q, r), land, IntervalSet.point(self.cost.discrete[e]), "reset")
            if r % 2 == 1:
                continue
            # instantaneous single edges at the milestone
            for e in pta.out_edges[q]:
                if pta.edges[e].reset:
                    continue
                land = self.lands(e, r)
                if land is not None:
                    self._add((q, r), land, IntervalSet.point(self.cost.discrete[e]), "instant")
            o = r + 1
            inst = self.instant_adj(r)
            r0 = self.closure(inst, [q])
            starts = {s for s in r0 if self.inv_ok(s, o)}
            if not starts:
                continue
            if part.is_unbounded(o):
                for q2 in pta.locations:
                    info = self.strip(o, starts, False, "inside", q2)
                    if info is None:
                        continue
                    lab = IntervalSet.point(0) if info.cmax == 0 else IntervalSet.of(0, info.lo_closed, None, False)
                    self._add((q, r), (q2, o), lab, "top")
                continue
            delta = part.upper(o) - part.lower(o)
            for q2 in pta.locations:
                info = self.strip(o, starts, False, "right", q2)
                if info is not None:
                    self.strips[(q, r, q2)] = info
                    self._add((q, r), (q2, r + 2), info.scaled(delta), "milestone")
                info = self.strip(o, starts, False, "inside", q2)
                if info is not None:
                    lab = IntervalSet.point(0) if info.cmax == 0 else IntervalSet.of(0, info.lo_closed, delta * info.cmax, False)
                    self._add((q, r), (q2, o), lab, "open")

    def source_edges(self, q: str, r: int) -> list:
        """Outgoing labels of the start node (q, x, r)."""
        key = (q, r)
        if key in self._source_cache:
            return self._source_cache[key]
        out = []
        if r % 2 == 0:
            out.append(SourceEdge((q, r), "point"))
        elif self.part.is_unbounded(r):
            for q2 in self.pta.locations:
                info = self.strip(r, {q}, True, "inside", q2)
                if info is not None:
                    out.append(SourceEdge((q2, r), "top", 0, info.cmax))
        else:
            for q2 in self.pta.locations:
                info = self.strip(r, {q}, True, "right", q2)
                if info is not None:
                    for p in info.pieces:
                        out.append(SourceEdge((q2, r + 1), "milestone", p.lo, p.hi, p.lo_closed, p.hi_closed))
                info = self.strip(r, {q}, True, "inside", q2)
                if info is not None:
                    out.append(SourceEdge((q2, r), "open", 0, info.cmax, True, info.cmax == 0))
        self._source_cache[key] = out
        return out

    def at_point_label(self, s: str, p: int, q2: str, y) -> Optional[IntervalSet]:
        """Costs from (s, a) at milestone p to (q2, y) with y inside the next open region."""
        o = p + 1
        starts = {t for t in self.closure(self.instant_adj(p), [s]) if self.inv_ok(t, o)}
        info = self.strip(o, starts, False, "at", q2)
        if info is None:
            return None
        return info.scaled(Fraction(y) - self.part.lower(o))

    # -------------------------------------------------------------- export

    def node_label(self, n: Node) -> str:
        return f"({n[0]},{self.part.label(n[1])})"

    def edge_list(self):
        for src, outs in sorted(self.edges.items(), key=lambda kv: (str(kv[0][0]), kv[0][1])):
            for dst, lab, kind in outs:
                yield src, dst, lab, kind

    def stats(self) -> dict:
        return {"nodes": len(self.nodes()), "edges": sum(len(v) for v in self.edges.values())}

    def to_dot(self, name="G") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=box, fontname=monospace];"]
        ids = {}
        for n in self.nodes():
            ids[n] = f"n{len(ids)}"
            lines.append(f'  {ids[n]} [label="{self.node_label(n)}"];')
        for src, dst, lab, kind in self.edge_list():
            style = {"reset": "dashed", "instant": "dotted"}.get(kind, "solid")
            lines.append(f'  {ids[src]} -> {ids[dst]} [label="{lab}", style={style}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def needs_unfolding(pta: OneClockPTA, cost: CostFunction) -> bool:
    """Costly non-resetting edges enabled on a whole open region."""
    for i, e in enumerate(pta.edges):
        if cost.discrete[i] and not e.reset:
            iv = e.guard.interval
            if not iv.is_point():
                return True
    return False


def build_cost_graph(pta, part: Partition, allowed=None, cost=None) -> CostGraph:
    return CostGraph(pta, part, cost or pta.cost(), allowed)


def describe_edge(g: CostGraph, src, dst, lab) -> str:
    return f"{g.node_label(src)} -> {g.node_label(dst)} {lab}"


__all__ = ["CostGraph", "SourceEdge", "StripInfo", "build_cost_graph", "needs_unfolding", "render",
           "Interval", "interval_contains"]
