"""Per-location satisfaction sets over clock values."""

from __future__ import annotations

from fractions import Fraction

from ..intervals import IntervalSet
from ..regions import Partition


class SatMap(dict):
    """location -> IntervalSet of clock values in [0, +inf)."""

    @staticmethod
    def full(pta) -> "SatMap":
        return SatMap({q: IntervalSet.nonneg() for q in pta.locations})

    @staticmethod
    def empty(pta) -> "SatMap":
        return SatMap({q: IntervalSet.empty() for q in pta.locations})

    @staticmethod
    def from_nodes(pta, part: Partition, nodes) -> "SatMap":
        per = {q: [] for q in pta.locations}
        for q, r in nodes:
            if q in per:
                per[q].append(part.intervals[r])
        return SatMap({q: IntervalSet(v) for q, v in per.items()})

    def holds(self, q, x) -> bool:
        return Fraction(x) in self[q]

    def complement(self) -> "SatMap":
        return SatMap({q: s.complement() for q, s in self.items()})

    def union(self, other: "SatMap") -> "SatMap":
        return SatMap({q: s.union(other[q]) for q, s in self.items()})

    def intersect(self, other: "SatMap") -> "SatMap":
        return SatMap({q: s.intersect(other[q]) for q, s in self.items()})

    def endpoints(self) -> set:
        out = set()
        for s in self.values():
            out |= s.endpoints()
        return out

    def nodes(self, part: Partition) -> set:
        out = set()
        for q, s in self.items():
            for r in part.regions_in(s):
                out.add((q, r))
        return out

    def render(self) -> dict:
        return {q: str(s) for q, s in self.items()}


def partition_for(pta, *maps) -> Partition:
    """Integers up to the largest constant plus every endpoint of the given maps."""
    m = pta.max_constant
    consts = set(range(m + 1))
    for sm in maps:
        consts |= {v for v in sm.endpoints() if v <= m}
    return Partition.of(consts)
