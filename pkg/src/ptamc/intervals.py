"""Exact interval sets over the nonnegative-ish rationals.

An upper bound of ``None`` stands for +inf and is always open.  Every
operation below keeps its result canonical, so equality of two
``IntervalSet`` values is plain tuple equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .rational import render

OPS = ("<", "<=", "=", ">=", ">")


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    lo_closed: bool
    hi: Optional[Fraction]
    hi_closed: bool

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        if self.hi is not None:
            object.__setattr__(self, "hi", Fraction(self.hi))
        else:
            object.__setattr__(self, "hi_closed", False)
        if self.is_empty():
            raise ValueError(f"empty interval {self._raw()}")

    @staticmethod
    def make(lo, lo_closed, hi, hi_closed) -> Optional["Interval"]:
        """Build an interval, or return None when the bounds describe nothing."""
        lo = Fraction(lo)
        if hi is None:
            return Interval(lo, lo_closed, None, False)
        hi = Fraction(hi)
        if lo < hi or (lo == hi and lo_closed and hi_closed):
            return Interval(lo, lo_closed, hi, hi_closed)
        return None

    @staticmethod
    def point(v) -> "Interval":
        return Interval(Fraction(v), True, Fraction(v), True)

    @staticmethod
    def closed(lo, hi) -> "Interval":
        return Interval(Fraction(lo), True, None if hi is None else Fraction(hi), hi is not None)

    def is_empty(self) -> bool:
        if self.hi is None:
            return False
        if self.lo < self.hi:
            return False
        return not (self.lo == self.hi and self.lo_closed and self.hi_closed)

    def is_point(self) -> bool:
        return self.hi is not None and self.lo == self.hi

    def __contains__(self, v) -> bool:
        v = Fraction(v)
        if v < self.lo or (v == self.lo and not self.lo_closed):
            return False
        if self.hi is None:
            return True
        return v < self.hi or (v == self.hi and self.hi_closed)

    def _raw(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{render(self.lo)},{render(self.hi)}{right}"

    def __str__(self) -> str:
        if self.is_point():
            return "{" + render(self.lo) + "}"
        return self._raw()

    def interior_point(self) -> Fraction:
        if self.hi is None:
            return self.lo + 1
        return (self.lo + self.hi) / 2


def _lo_key(iv: Interval):
    # closed lower bounds sort before open ones at the same value
    return (iv.lo, 0 if iv.lo_closed else 1)


def _touch(a: Interval, b: Interval) -> bool:
    """True when a (with a.lo <= b.lo) and b overlap or are adjacent."""
    if a.hi is None:
        return True
    if b.lo < a.hi:
        return True
    if b.lo == a.hi:
        return a.hi_closed or b.lo_closed
    return False


def _hi_max(a: Interval, b: Interval):
    if a.hi is None or b.hi is None:
        return None, False
    if a.hi > b.hi:
        return a.hi, a.hi_closed
    if b.hi > a.hi:
        return b.hi, b.hi_closed
    return a.hi, a.hi_closed or b.hi_closed


class IntervalSet:
    """Canonical finite union of pairwise disjoint, non-adjacent intervals."""

    __slots__ = ("items", "_hash")

    def __init__(self, items: Iterable[Interval] = ()):
        self.items = normalize_items(items)
        self._hash = None

    @classmethod
    def _canonical(cls, items: tuple) -> "IntervalSet":
        out = cls.__new__(cls)
        out.items = items
        out._hash = None
        return out

    @staticmethod
    def empty() -> "IntervalSet":
        return _EMPTY

    @staticmethod
    def point(v) -> "IntervalSet":
        return IntervalSet._canonical((Interval.point(v),))

    @staticmethod
    def of(lo, lo_closed, hi, hi_closed) -> "IntervalSet":
        iv = Interval.make(lo, lo_closed, hi, hi_closed)
        return IntervalSet._canonical((iv,)) if iv else _EMPTY

    @staticmethod
    def nonneg() -> "IntervalSet":
        return IntervalSet._canonical((Interval(Fraction(0), True, None, False),))

    def __iter__(self):
        return iter(self.items)

    def __len__(self):
        return len(self.items)

    def __bool__(self):
        return bool(self.items)

    def __eq__(self, other):
        return isinstance(other, IntervalSet) and self.items == other.items

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.items)
        return self._hash

    def __contains__(self, v) -> bool:
        return any(v in iv for iv in self.items)

    def __str__(self) -> str:
        if not self.items:
            return "{}"
        return " u ".join(str(iv) for iv in self.items)

    __repr__ = __str__

    def union(self, other: "IntervalSet") -> "IntervalSet":
        if not other.items:
            return self
        if not self.items:
            return other
        return IntervalSet(self.items + other.items)

    __or__ = union

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a in self.items:
            for b in other.items:
                iv = _intersect(a, b)
                if iv is not None:
                    out.append(iv)
        return IntervalSet(out)

    __and__ = intersect

    def complement(self, lo=Fraction(0)) -> "IntervalSet":
        """Complement within [lo, +inf)."""
        out = []
        cur, cur_closed = Fraction(lo), True
        for iv in self.items:
            gap = Interval.make(cur, cur_closed, iv.lo, not iv.lo_closed)
            if gap is not None and gap.lo >= lo:
                out.append(gap)
            if iv.hi is None:
                return IntervalSet(out)
            cur, cur_closed = iv.hi, not iv.hi_closed
        out.append(Interval(cur, cur_closed, None, False))
        return IntervalSet(out)

    def minus(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersect(other.complement(min([Fraction(0)] + [iv.lo for iv in self.items])))

    def issubset(self, other: "IntervalSet") -> bool:
        return self.union(other) == other

    def endpoints(self):
        pts = set()
        for iv in self.items:
            pts.add(iv.lo)
            if iv.hi is not None:
                pts.add(iv.hi)
        return pts


def _intersect(a: Interval, b: Interval) -> Optional[Interval]:
    if a.lo > b.lo or (a.lo == b.lo and not a.lo_closed):
        lo, lc = a.lo, a.lo_closed
    else:
        lo, lc = b.lo, b.lo_closed
    if a.lo == b.lo:
        lc = a.lo_closed and b.lo_closed
    if a.hi is None:
        hi, hc = b.hi, b.hi_closed
    elif b.hi is None:
        hi, hc = a.hi, a.hi_closed
    elif a.hi < b.hi:
        hi, hc = a.hi, a.hi_closed
    elif b.hi < a.hi:
        hi, hc = b.hi, b.hi_closed
    else:
        hi, hc = a.hi, a.hi_closed and b.hi_closed
    return Interval.make(lo, lc, hi, hc)


def normalize_items(raw: Iterable[Interval]) -> tuple:
    ivs = sorted((iv for iv in raw if iv is not None), key=_lo_key)
    out: list[Interval] = []
    for iv in ivs:
        if out and _touch(out[-1], iv):
            prev = out[-1]
            hi, hc = _hi_max(prev, iv)
            out[-1] = Interval(prev.lo, prev.lo_closed, hi, hc)
        else:
            out.append(iv)
    return tuple(out)


def normalize(raw: Iterable[Interval]) -> IntervalSet:
    return IntervalSet(raw)


_EMPTY = IntervalSet._canonical(())


def _add_bounds(a: Interval, b: Interval) -> Interval:
    lo = a.lo + b.lo
    lc = a.lo_closed and b.lo_closed
    if a.hi is None or b.hi is None:
        return Interval(lo, lc, None, False)
    return Interval(lo, lc, a.hi + b.hi, a.hi_closed and b.hi_closed)


def minkowski_sum(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    if not a.items or not b.items:
        return _EMPTY
    if len(b.items) == 1 and b.items[0].is_point() and b.items[0].lo == 0:
        return a
    if len(a.items) == 1 and a.items[0].is_point() and a.items[0].lo == 0:
        return b
    return IntervalSet(_add_bounds(x, y) for x in a.items for y in b.items)


def shift(a: IntervalSet, k) -> IntervalSet:
    k = Fraction(k)
    if k == 0:
        return a
    return IntervalSet._canonical(tuple(
        Interval(iv.lo + k, iv.lo_closed, None if iv.hi is None else iv.hi + k, iv.hi_closed)
        for iv in a.items))


def scale(a: IntervalSet, k) -> IntervalSet:
    k = Fraction(k)
    if k < 0:
        raise ValueError("scale factor must be nonnegative")
    if not a.items:
        return _EMPTY
    if k == 0:
        return IntervalSet.point(0)
    return IntervalSet._canonical(tuple(
        Interval(iv.lo * k, iv.lo_closed, None if iv.hi is None else iv.hi * k, iv.hi_closed)
        for iv in a.items))


def scale_interval(iv: Interval, k) -> IntervalSet:
    return scale(IntervalSet._canonical((iv,)), k)


def saturate(a: IntervalSet, cap) -> IntervalSet:
    """Map every value above cap onto cap itself."""
    cap = Fraction(cap)
    out = []
    for iv in a.items:
        if iv.lo > cap or (iv.lo == cap and not iv.lo_closed):
            out.append(Interval.point(cap))
        elif iv.hi is None or iv.hi > cap:
            out.append(Interval(iv.lo, iv.lo_closed, cap, True))
        else:
            out.append(iv)
    return IntervalSet(out)


def meets_constraint(a: IntervalSet, op: str, c) -> bool:
    """True iff some value of a satisfies ``value op c``."""
    c = Fraction(c)
    if op == "=":
        return c in a
    if not a.items:
        return False
    if op in ("<", "<="):
        first = a.items[0]
        if op == "<":
            return first.lo < c
        return first.lo < c or (first.lo == c and first.lo_closed)
    last = a.items[-1]
    if last.hi is None:
        return True
    if op == ">":
        return last.hi > c
    if op == ">=":
        return last.hi > c or (last.hi == c and last.hi_closed)
    raise ValueError(f"unknown comparison {op!r}")


def constraint_set(op: str, c) -> IntervalSet:
    """The set {v >= 0 : v op c}."""
    c = Fraction(c)
    return {
        "<": IntervalSet.of(0, True, c, False),
        "<=": IntervalSet.of(0, True, c, True),
        "=": IntervalSet.of(c, True, c, True) if c >= 0 else _EMPTY,
        ">=": IntervalSet.of(max(c, 0), True, None, False),
        ">": IntervalSet.of(max(c, 0), c < 0, None, False),
    }[op]


def subtract_clamped(need: IntervalSet, paid: IntervalSet) -> IntervalSet:
    """{n - p : n in need, p in paid} intersected with [0, +inf)."""
    out = []
    for n in need.items:
        for p in paid.items:
            if n.hi is None:
                hi, hc = None, False
            else:
                hi, hc = n.hi - p.lo, n.hi_closed and p.lo_closed
            if p.hi is None:
                lo, lc = Fraction(0), True
            else:
                lo, lc = n.lo - p.hi, n.lo_closed and p.hi_closed
                if lo < 0:
                    lo, lc = Fraction(0), True
            iv = Interval.make(lo, lc, hi, hc)
            if iv is not None:
                out.append(iv)
    return IntervalSet(out)


@dataclass(frozen=True)
class Linear:
    """a + b*y"""

    a: Fraction
    b: Fraction = Fraction(0)

    def at(self, y) -> Fraction:
        return self.a + self.b * Fraction(y)

    def __str__(self):
        if self.b == 0:
            return render(self.a)
        return f"{render(self.a)}{'+' if self.b >= 0 else '-'}{render(abs(self.b))}*y"


@dataclass(frozen=True)
class ParamInterval:
    """Interval whose endpoints are linear in a single parameter y."""

    lo: Linear
    lo_closed: bool
    hi: Optional[Linear]
    hi_closed: bool

    def at(self, y) -> Optional[Interval]:
        hi = None if self.hi is None else self.hi.at(y)
        return Interval.make(self.lo.at(y), self.lo_closed, hi, self.hi_closed if hi is not None else False)

    def __str__(self):
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo},{'inf' if self.hi is None else self.hi}{right}"


def eval_param(p: ParamInterval, y) -> Optional[Interval]:
    return p.at(y)


def parse_interval_set(text: str) -> IntervalSet:
    """Inverse of ``str`` on interval sets, for round-tripping result documents."""
    from .rational import parse_rational

    text = text.strip()
    if text == "{}":
        return _EMPTY
    out = []
    for part in text.split(" u "):
        part = part.strip()
        if part.startswith("{"):
            out.append(Interval.point(parse_rational(part[1:-1])))
            continue
        lo_s, hi_s = part[1:-1].split(",")
        hi = None if hi_s.strip() == "inf" else parse_rational(hi_s)
        out.append(Interval(parse_rational(lo_s), part[0] == "[", hi, part[-1] == "]"))
    return IntervalSet(out)
