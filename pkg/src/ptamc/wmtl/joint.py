"""Concrete joint configurations of the automaton and the ATA.

This is the semantics the region words abstract.  It is used to test the
symbolic successors and to replay abstract witnesses on exact values.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import floor

from ..model import CostFunction, OneClockPTA
from .ata import ATA, models
from .words import JointConfig, encode


def region_of(v, M):
    """(integer part or None above M, whether the fractional part is 0)."""
    v = Fraction(v)
    if v > M:
        return None, False
    return floor(v), v.denominator == 1


def delay(cfg: JointConfig, t, cost: CostFunction) -> JointConfig:
    t = Fraction(t)
    r = cost.rate[cfg.location]
    return JointConfig(cfg.location, cfg.clock + t, frozenset((l, v + r * t) for l, v in cfg.obligations))


def critical_delays(cfg: JointConfig, pta: OneClockPTA, cost: CostFunction, M: int) -> list:
    """Positive delays, one per distinct encoding reachable by waiting within the invariant."""
    moving = [cfg.clock]
    frozen = [Fraction(0)]
    if cost.rate[cfg.location] == 1:
        moving += [v for _, v in cfg.obligations]
    else:
        # the clock alone moves: it also meets the fractional parts of the obligations
        frozen += [v - floor(v) for _, v in cfg.obligations if v <= M]
    hits = set()
    for v in moving:
        if v > M:
            continue
        for k in range(floor(v), M + 2):
            for f in frozen:
                if k + f - v > 0:
                    hits.add(k + f - v)
    hits = sorted(hits)
    cand = []
    prev = Fraction(0)
    for h in hits:
        cand += [(prev + h) / 2, h]
        prev = h
    cand.append(prev + 1)
    inv = pta.invariant[cfg.location]
    return [t for t in cand if cfg.clock + t in inv]


def discrete_steps(cfg: JointConfig, pta: OneClockPTA, ata: ATA, cost: CostFunction, M: int) -> set:
    out = set()
    for e in pta.out_edges[cfg.location]:
        edge = pta.edges[e]
        if cfg.clock not in edge.guard:
            continue
        x2 = Fraction(0) if edge.reset else cfg.clock
        if x2 not in pta.invariant[edge.target]:
            continue
        k = cost.discrete[e]
        sigma = pta.labels[edge.target]
        choices = []
        for loc, v in sorted(cfg.obligations):
            v2 = v + k
            reg, frac0 = region_of(v2, M)
            ms = models(ata.delta[loc], sigma, reg, frac0)
            if not ms:
                choices = None
                break
            choices.append([(v2, m) for m in ms])
        if choices is None:
            continue
        for combo in product(*choices):
            obl = set()
            for v2, m in combo:
                for loc, reset in m:
                    obl.add((loc, Fraction(0) if reset else v2))
            out.add(JointConfig(edge.target, x2, frozenset(obl)))
    return out


def time_encodings(cfg, pta, cost, M) -> list:
    """Distinct encodings reached by positive delays, in order."""
    out = []
    for t in critical_delays(cfg, pta, cost, M):
        w = encode(delay(cfg, t, cost), M)
        if (not out or out[-1] != w) and w != encode(cfg, M):
            out.append(w)
    return out
