"""Brute-force cost sets between consecutive milestones.

For a state (q, a) and the next constant b, enumerate concrete runs that
let exactly b - a time units pass, fire only zero-cost non-resetting edges
and end in q2 at b.  Delays are taken on a grid, plus the corners of the
delay simplex nudged by a tiny epsilon towards each of its faces, to
approach corners that are not themselves feasible.  The
cost of a fixed edge sequence is linear in the delays and its feasible set
is convex, so per sequence the exact cost set is an interval whose endpoints
are b - a times a rate; the sampled extremes select that rate, and an
endpoint is closed exactly when some sampled run attains it.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from ..intervals import Interval, IntervalSet


def _compositions(total: int, parts: int):
    """Nonnegative integer vectors of length ``parts`` summing to ``total``."""
    for cuts in combinations(range(total + parts - 1), parts - 1):
        prev, out = -1, []
        for c in cuts:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 2 - prev)
        yield out


def _feasible(pta, cost, walk, start, delays):
    """Concrete check of the run; returns its cost or None."""
    q, x, c = walk[0][0], start, Fraction(0)
    for j, d in enumerate(delays):
        x += d
        if x not in pta.invariant[q]:
            return None
        c += d * cost.rate[q]
        if j < len(walk) - 1:
            e = walk[j + 1][1]
            if x not in pta.edges[e].guard:
                return None
            q = pta.edges[e].target
            if x not in pta.invariant[q]:
                return None
    return c


def _walks(pta, cost, q, q2, max_len):
    """Edge sequences from q to q2 over zero-cost non-resetting edges: [(loc, edge-in), ...].

    Self-loops only split a stay and are skipped; a location is visited at
    most twice, which is enough to pass by the cheapest and the dearest
    location between any two ends.
    """
    usable = [i for i, e in enumerate(pta.edges)
              if not e.reset and cost.discrete[i] == 0 and e.source != e.target]
    out = []

    def go(walk):
        if walk[-1][0] == q2:
            out.append(list(walk))
        if len(walk) > max_len:
            return
        for i in usable:
            e = pta.edges[i]
            if e.source == walk[-1][0] and sum(s == e.target for s, _ in walk) < 2:
                walk.append((e.target, i))
                go(walk)
                walk.pop()

    go([(q, None)])
    return out


def milestone_costs(pta, a, b, q, q2, cost=None, grid: int = 4, max_len: int = None) -> IntervalSet:
    """Exact cost set of runs from (q, a) to (q2, b) spending b - a time units without resets."""
    cost = cost or pta.cost()
    a, b = Fraction(a), Fraction(b)
    delta = b - a
    max_len = max_len if max_len is not None else 3 * len(pta.locations)
    eps = delta / 1000
    pieces = []
    for walk in _walks(pta, cost, q, q2, max_len):
        n = len(walk)
        rates = [cost.rate[s] for s, _ in walk]
        samples = []
        for comp in _compositions(grid, n):
            c = _feasible(pta, cost, walk, a, [delta * k / grid for k in comp])
            if c is not None:
                samples.append(c)
        # corners of the delay simplex, entered along every face direction
        for j in range(n):
            others = [k for k in range(n) if k != j]
            for size in range(len(others) + 1):
                for nudge in combinations(others, size):
                    d = [eps if k in nudge else Fraction(0) for k in range(n)]
                    d[j] = delta - eps * size
                    c = _feasible(pta, cost, walk, a, d)
                    if c is not None:
                        samples.append(c)
        if not samples:
            continue
        ends = []
        for pick in (min, max):
            v = pick(samples)
            exact = min((delta * r for r in rates), key=lambda t: abs(t - v))
            if abs(exact - v) > eps * max(rates + [1]) * n:
                raise AssertionError(f"sampled extreme {v} is not near a corner value")
            ends.append((exact, exact in samples))
        (lo, lc), (hi, hc) = ends
        iv = Interval.make(lo, lc, hi, hc)
        if iv:
            pieces.append(iv)
    return IntervalSet(pieces)
