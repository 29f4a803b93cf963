"""Grid granularity of a formula and sample-point evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..model import OneClockPTA
from ..rational import lcm
from ..regions import Partition
from ..syntax import constrained_height, cost_names


@dataclass(frozen=True)
class Granularity:
    """Satisfaction sets are unions of intervals over multiples of g = 1/C^h up to M."""

    C: int
    h: int
    M: int

    @property
    def g(self) -> Fraction:
        return Fraction(1, self.C ** self.h)

    @property
    def constants(self) -> tuple:
        steps = self.M * self.C ** self.h
        return tuple(k * self.g for k in range(steps + 1))

    @property
    def sample_count(self) -> int:
        return 2 * self.M * self.C ** self.h + 2

    def samples(self):
        """k*g/2 for k = 0 .. 2*M*C^h + 1: the grid points, the midpoints and one point past M."""
        half = self.g / 2
        return (k * half for k in range(self.sample_count))

    def partition(self) -> Partition:
        return Partition.of(self.constants)


def rate_lcm(pta: OneClockPTA, names) -> int:
    rates = set()
    for name in names:
        rates |= {r for r in pta.cost(name).rate.values() if r > 0}
    return lcm(*sorted(rates)) if rates else 1


def granularity(pta: OneClockPTA, formula) -> Granularity:
    from .engine import prepare

    f = prepare(pta, formula)
    return Granularity(rate_lcm(pta, cost_names(f)), constrained_height(f), pta.max_constant)


def sample_verdicts(pta: OneClockPTA, sat, gran: Granularity) -> dict:
    """(location, x) -> verdict at every sample point of ``gran``."""
    return {(q, x): sat.holds(q, x) for q in pta.locations for x in gran.samples()
            if x in pta.invariant[q]}


def grid_aligned(sat, gran: Granularity) -> bool:
    """Every finite endpoint is a multiple of g no larger than M."""
    for v in sat.endpoints():
        if v > gran.M or (v / gran.g).denominator != 1:
            return False
    return True
