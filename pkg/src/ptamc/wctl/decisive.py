"""Acceptance of a single decisive mixed move.

Both E G{=c} false and the "paid exactly c" target ask for a path of cost p
followed by one mixed move whose cost m satisfies a condition on (p, m):

* ``jump``: p < c < p + m (the move steps over c);
* ``paid``: m > 0 and p + m = c.

The move leaves (q2, y), waits until z and fires an edge, so
m = rate(q2) * (z - y) + k.  Everything is linear, so the acceptable values
of p are obtained by Fourier-Motzkin projection.
"""

from __future__ import annotations

from fractions import Fraction

from ..intervals import IntervalSet, subtract_clamped
from ..linsys import System
from .costgraph import CostGraph
from .solve import need_sets


def final_moves(g: CostGraph, q2: str, ok: dict, offset: dict):
    """(firing clock set, rate, effective discrete cost) for every final edge out of q2."""
    pta = g.pta
    inv = IntervalSet([pta.invariant[q2].interval])
    off = offset or {}
    out = []
    for e in pta.out_edges[q2]:
        edge = pta.edges[e]
        zs = IntervalSet([edge.guard.interval]).intersect(inv)
        if edge.reset:
            if Fraction(0) not in ok[edge.target]:
                continue
        else:
            zs = zs.intersect(ok[edge.target])
        if not zs:
            continue
        k = g.cost.discrete[e] + off.get(edge.target, 0) - off.get(q2, 0)
        out.append((zs, g.rate[q2], Fraction(k)))
    return out


def _condition(s: System, mode: str, c, p: dict, rho, k, y, z):
    # m = rho*z - rho*y + k, with y either a variable name or a constant
    m = {1: k}
    m[z] = m.get(z, 0) + rho
    if isinstance(y, str):
        m[y] = m.get(y, 0) - rho
    else:
        m[1] = m[1] - rho * y
    total = dict(p)
    for key, val in m.items():
        total[key] = total.get(key, 0) + val
    if mode == "jump":
        s.lt(p, c)
        s.gt(total, c)
    elif mode == "paid":
        s.eq(total, c)
        s.gt(m, 0)
    else:
        raise ValueError(mode)


class Decisive:
    """Need sets for one decisive-move goal on cost graph ``g``."""

    def __init__(self, g: CostGraph, ok: dict, mode: str, c, offset: dict = None):
        self.g = g
        self.ok = ok
        self.mode = mode
        self.c = Fraction(c)
        self.offset = offset or {}
        self._moves = {q: final_moves(g, q, ok, self.offset) for q in g.pta.locations}
        self.need = need_sets(g, self._initial())

    def _off(self, q):
        return Fraction(self.offset.get(q, 0))

    def _point_accept(self, q2, a) -> IntervalSet:
        """Graph costs p on arrival at (q2, a) that a move fired from a accepts."""
        out = IntervalSet.empty()
        for zs, rho, k in self._moves[q2]:
            for J in zs:
                s = System().bound("z", J).ge({"z": 1}, a).ge({"p": 1}, 0)
                _condition(s, self.mode, self.c, {"p": 1, 1: self._off(q2)}, rho, k, a, "z")
                out = out.union(s.project("p"))
        return out

    def _strip_accept(self, info, q2, y_region, x_lo, extra=None) -> IntervalSet:
        """Arrival costs u at the strip start x_lo (fixed) for reaching (q2, y) then moving."""
        out = IntervalSet.empty()
        for zs, rho, k in self._moves[q2]:
            for J in zs:
                for p in info.pieces:
                    s = System().bound("y", y_region).bound("z", J).ge({"z": 1, "y": -1}, 0).ge({"u": 1}, 0)
                    s.ge({"w": 1, "y": -p.lo}, -p.lo * x_lo, strict=not p.lo_closed)
                    s.le({"w": 1, "y": -p.hi}, -p.hi * x_lo, strict=not p.hi_closed)
                    _condition(s, self.mode, self.c, {"u": 1, "w": 1, 1: self._off(q2)}, rho, k, "y", "z")
                    out = out.union(s.project("u"))
        return out

    def _initial(self) -> dict:
        g, part = self.g, self.g.part
        init = {}
        for q, r in g.nodes():
            if r % 2:
                continue
            a = part.lower(r)
            acc = self._point_accept(q, a)
            o = r + 1
            if o < part.count:
                starts = {t for t in g.closure(g.instant_adj(r), [q]) if g.inv_ok(t, o)}
                for q2 in g.pta.locations:
                    info = g.strip(o, starts, False, "at", q2) if starts else None
                    if info is not None:
                        acc = acc.union(self._strip_accept(info, q2, part.intervals[o], a))
            if acc:
                init[(q, r)] = acc
        return init

    def start_set(self, q: str, r: int) -> IntervalSet:
        """Clock values x in region r of q (a copy-0 location) satisfying the goal."""
        from .solve import solve_start

        g, part = self.g, self.g.part
        out = solve_start(g, q, r, self.need)
        if r % 2 == 0 or not g.inv_ok(q, r):
            return out
        region = part.intervals[r]
        # fire straight from x (y = x), possibly after instant zero-cost moves
        for q2 in g.closure(g.interior_adj(r), [q]):
            for zs, rho, k in self._moves[q2]:
                for J in zs:
                    s = System().bound("x", region).bound("z", J).ge({"z": 1, "x": -1}, 0)
                    _condition(s, self.mode, self.c, {1: self._off(q2) - self._off(q)}, rho, k, "x", "z")
                    out = out.union(s.project("x"))
        # delay to some y > x inside the region first
        for q2 in g.pta.locations:
            info = g.strip(r, {q}, True, "at", q2)
            if info is None:
                continue
            for zs, rho, k in self._moves[q2]:
                for J in zs:
                    for p in info.pieces:
                        s = System().bound("x", region).bound("y", region).bound("z", J)
                        s.gt({"y": 1, "x": -1}, 0).ge({"z": 1, "y": -1}, 0)
                        s.ge({"w": 1, "y": -p.lo, "x": p.lo}, 0, strict=not p.lo_closed)
                        s.le({"w": 1, "y": -p.hi, "x": p.hi}, 0, strict=not p.hi_closed)
                        _condition(s, self.mode, self.c, {"w": 1, 1: self._off(q2) - self._off(q)}, rho, k, "y", "z")
                        out = out.union(s.project("x"))
        return out.intersect(IntervalSet([region]))


__all__ = ["Decisive", "final_moves", "subtract_clamped"]
