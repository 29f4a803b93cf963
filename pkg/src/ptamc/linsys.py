"""Tiny exact Fourier-Motzkin solver for strict and non-strict linear systems.

A constraint ``({var: coef}, const, strict)`` reads ``sum coef*var + const < 0``
when strict and ``<= 0`` otherwise.  Systems here have at most five variables,
so plain elimination is fast enough.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .intervals import Interval, IntervalSet


class System:
    def __init__(self):
        self.rows: list[tuple[dict, Fraction, bool]] = []

    def le(self, lhs: dict, rhs=0, strict=False):
        """lhs <= rhs (or < when strict); lhs is {var: coef} plus key 1 for constants."""
        coefs = {k: Fraction(v) for k, v in lhs.items() if k != 1 and v != 0}
        const = Fraction(lhs.get(1, 0)) - Fraction(rhs)
        self.rows.append((coefs, const, strict))
        return self

    def lt(self, lhs: dict, rhs=0):
        return self.le(lhs, rhs, strict=True)

    def ge(self, lhs: dict, rhs=0, strict=False):
        neg = {k: -Fraction(v) for k, v in lhs.items()}
        return self.le(neg, -Fraction(rhs), strict)

    def gt(self, lhs: dict, rhs=0):
        return self.ge(lhs, rhs, strict=True)

    def eq(self, lhs: dict, rhs=0):
        self.le(lhs, rhs)
        return self.ge(lhs, rhs)

    def bound(self, var, iv: Interval):
        self.ge({var: 1}, iv.lo, strict=not iv.lo_closed)
        if iv.hi is not None:
            self.le({var: 1}, iv.hi, strict=not iv.hi_closed)
        return self

    def copy(self) -> "System":
        out = System()
        out.rows = list(self.rows)
        return out

    def project(self, keep) -> "IntervalSet | bool":
        """Eliminate every variable except ``keep``.

        Returns the feasible set of ``keep`` (or a bool when ``keep`` is None).
        """
        empty = IntervalSet.empty() if keep is not None else False
        rows = _dedupe(self.rows)
        if rows is None:
            return empty
        variables = {v for r in rows for v in r[0]}
        for v in sorted(variables - {keep}, key=str):
            rows = _eliminate(rows, v)
            if rows is None:
                return empty
        lo, lo_closed, hi, hi_closed = None, True, None, True
        for coefs, const, strict in rows:
            a = coefs.get(keep, Fraction(0))
            if a == 0:
                if const > 0 or (strict and const == 0):
                    return IntervalSet.empty() if keep is not None else False
                continue
            bnd = -const / a
            if a > 0:
                if hi is None or bnd < hi or (bnd == hi and strict):
                    hi, hi_closed = bnd, not strict
            else:
                if lo is None or bnd > lo or (bnd == lo and strict):
                    lo, lo_closed = bnd, not strict
        if keep is None:
            return True
        if lo is None:
            raise ValueError(f"variable {keep!r} is unbounded below")
        return IntervalSet.of(lo, lo_closed, hi, hi_closed and hi is not None)

    def feasible(self) -> bool:
        return bool(self.project(None))


def _eliminate(rows, v):
    pos, neg, rest = [], [], []
    for r in rows:
        a = r[0].get(v, 0)
        (pos if a > 0 else neg if a < 0 else rest).append(r)
    for cp, kp, sp in pos:
        ap = cp[v]
        for cn, kn, sn in neg:
            an = -cn[v]
            coefs = {}
            for k in set(cp) | set(cn):
                if k == v:
                    continue
                val = cp.get(k, 0) * an + cn.get(k, 0) * ap
                if val != 0:
                    coefs[k] = val
            const = kp * an + kn * ap
            strict = sp or sn
            if not coefs:
                if const > 0 or (strict and const == 0):
                    return None
                continue
            rest.append((coefs, const, strict))
    return _dedupe(rest)


def _dedupe(rows: Iterable):
    seen = {}
    for coefs, const, strict in rows:
        if not coefs:
            if const > 0 or (strict and const == 0):
                return None
            continue
        # normalize by the first nonzero coefficient magnitude
        k0 = min(coefs, key=str)
        s = abs(coefs[k0])
        key = tuple(sorted((str(k), c / s) for k, c in coefs.items()))
        c = const / s
        old = seen.get(key)
        if old is None or c > old[1] or (c == old[1] and strict and not old[2]):
            seen[key] = ({k: x / s for k, x in coefs.items()}, c, strict)
    return list(seen.values())
