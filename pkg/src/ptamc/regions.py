"""Region partitions of the single clock and the time-abstract region graph."""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable

from .intervals import Interval, IntervalSet
from .rational import render


@dataclass(frozen=True)
class Partition:
    """Regions {a_0}, (a_0,a_1), {a_1}, ..., {a_n}, (a_n,+inf) with a_0 = 0.

    Region index 2i is the point a_i, 2i+1 the open interval after it.
    """

    constants: tuple

    @staticmethod
    def of(values: Iterable) -> "Partition":
        pts = sorted({Fraction(v) for v in values} | {Fraction(0)})
        if pts[0] < 0:
            raise ValueError("region constants must be nonnegative")
        return Partition(tuple(pts))

    @staticmethod
    def classical(m: int) -> "Partition":
        return Partition.of(range(int(m) + 1))

    @property
    def n(self) -> int:
        return len(self.constants) - 1

    @property
    def top(self) -> Fraction:
        return self.constants[-1]

    @property
    def count(self) -> int:
        return 2 * len(self.constants)

    def is_point(self, r: int) -> bool:
        return r % 2 == 0

    def is_unbounded(self, r: int) -> bool:
        return r == self.count - 1

    def lower(self, r: int) -> Fraction:
        return self.constants[r // 2]

    def upper(self, r: int):
        if r % 2 == 0:
            return self.constants[r // 2]
        if self.is_unbounded(r):
            return None
        return self.constants[r // 2 + 1]

    def interval(self, r: int) -> Interval:
        if r % 2 == 0:
            return Interval.point(self.constants[r // 2])
        return Interval(self.lower(r), False, self.upper(r), False)

    @cached_property
    def intervals(self) -> tuple:
        return tuple(self.interval(r) for r in range(self.count))

    def region_of(self, x) -> int:
        x = Fraction(x)
        i = bisect_left(self.constants, x)
        if i < len(self.constants) and self.constants[i] == x:
            return 2 * i
        return 2 * i - 1

    def sample(self, r: int) -> Fraction:
        return self.interval(r).interior_point() if r % 2 else self.constants[r // 2]

    def label(self, r: int) -> str:
        if r % 2 == 0:
            return "{" + render(self.constants[r // 2]) + "}"
        return f"({render(self.lower(r))},{render(self.upper(r))})"

    def regions_in(self, s: IntervalSet) -> list:
        """Region indices whose interval is contained in s (s must be aligned)."""
        return [r for r in range(self.count) if _contains(s, self.intervals[r])]


def _contains(s: IntervalSet, iv: Interval) -> bool:
    probe = iv.lo if iv.is_point() else iv.interior_point()
    return probe in s


def interval_contains(outer: Interval, inner: Interval) -> bool:
    if inner.lo < outer.lo or (inner.lo == outer.lo and inner.lo_closed and not outer.lo_closed):
        return False
    if outer.hi is None:
        return True
    if inner.hi is None:
        return False
    if inner.hi > outer.hi:
        return False
    return not (inner.hi == outer.hi and inner.hi_closed and not outer.hi_closed)


def union_of_regions(part: Partition, regions: Iterable[int]) -> IntervalSet:
    return IntervalSet(part.intervals[r] for r in regions)


class RegionGraph:
    """Time-abstract mixed-move graph over (location, region) pairs.

    ``part`` must contain every guard and invariant constant, so guards are
    uniform on regions.
    """

    def __init__(self, pta, part: Partition):
        self.pta = pta
        self.part = part
        self._inv_ok = {}
        for q in pta.locations:
            inv = pta.invariant[q].interval
            self._inv_ok[q] = [interval_contains(inv, part.intervals[r]) for r in range(part.count)]

    def inv_ok(self, q, r) -> bool:
        return self._inv_ok[q][r]

    def nodes(self):
        return [(q, r) for q in self.pta.locations for r in range(self.part.count) if self._inv_ok[q][r]]

    def delay_targets(self, q, r):
        """Regions reachable from region r of q by letting time pass (r included)."""
        out = []
        s = r
        while s < self.part.count and self._inv_ok[q][s]:
            out.append(s)
            s += 1
        return out

    def edge_targets(self, e, r):
        """Target region of firing edge e from region r, or None if impossible."""
        pta = self.pta
        edge = pta.edges[e]
        if not interval_contains(edge.guard.interval, self.part.intervals[r]):
            return None
        t = 0 if edge.reset else r
        if not self._inv_ok[edge.target][t]:
            return None
        return t

    def mixed_successors(self, q, r):
        """(delay region, edge index, target location, target region) for all mixed moves."""
        out = []
        for s in self.delay_targets(q, r):
            for e in self.pta.out_edges[q]:
                t = self.edge_targets(e, s)
                if t is not None:
                    out.append((s, e, self.pta.edges[e].target, t))
        return out

    def can_delay(self, q, r) -> bool:
        """A strictly positive delay is possible from every state of region r."""
        if r % 2 == 1:
            return self._inv_ok[q][r]
        return r + 1 < self.part.count and self._inv_ok[q][r + 1]

    def gfp(self, allowed, succ) -> set:
        """Greatest set Z within allowed such that every node of Z has succ into Z."""
        z = set(allowed)
        changed = True
        while changed:
            changed = False
            for n in list(z):
                if not any(m in z for m in succ(n)):
                    z.discard(n)
                    changed = True
        return z

    def lfp_backward(self, base, allowed_mid, succ) -> set:
        """Nodes that reach base through nodes of allowed_mid (succ gives successors)."""
        nodes = self.nodes()
        pred = {n: [] for n in nodes}
        for n in nodes:
            for m in succ(n):
                if m in pred:
                    pred[m].append(n)
        out = set(base)
        stack = list(out)
        while stack:
            m = stack.pop()
            for n in pred.get(m, ()):
                if n not in out and n in allowed_mid:
                    out.add(n)
                    stack.append(n)
        return out
