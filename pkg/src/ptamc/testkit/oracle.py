"""Bounded brute-force oracle for WCTL on concrete grid runs.

The oracle never looks at regions or cost graphs except for liveness (which
it decides on its own classical-region enumeration).  It explores runs whose
delays are multiples of 1/den, up to ``depth`` mixed moves.  Results are
one-sided: existential claims are only confirmed and universal claims only
refuted; everything else is UNKNOWN.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ..model import OneClockPTA, State, enabled_moves, step, Move
from ..syntax import (AU, CAN_HAVE_NOT_PAID, EG, EGFalse, EU, HAS_PAID, TRUE, Atom, Const, Not, Or,
                      FormulaError)

T, F, U = True, False, None  # three-valued verdicts; None is "unknown"


@dataclass(frozen=True)
class OracleBudget:
    depth: int = 6
    den: int = 2
    horizon: Fraction = None  # largest clock value a delay may reach (default M + 1)

    def __post_init__(self):
        if self.den <= 0 or self.depth < 0:
            raise ValueError("budget needs a positive grid denominator and a nonnegative depth")


def _not(v):
    return None if v is None else not v


def _or(a, b):
    if a is True or b is True:
        return True
    if a is False and b is False:
        return False
    return None


def _meets(cost, op, c):
    return {"<": cost < c, "<=": cost <= c, "=": cost == c, ">=": cost >= c, ">": cost > c}[op]


class Oracle:
    def __init__(self, pta: OneClockPTA, budget: OracleBudget = OracleBudget()):
        self.pta = pta
        self.b = budget
        self.den = budget.den
        m = pta.max_constant
        self.horizon = Fraction(budget.horizon) if budget.horizon is not None else Fraction(m + 1)
        self._live = self._compute_live()
        self._memo = {}

    # ---------------------------------------------------------------- moves

    def moves(self, q, x):
        """(delay, edge, next state) for grid delays from (q, x)."""
        pta = self.pta
        win, _ = enabled_moves(pta, State(q, x))
        hi = self.horizon if win.hi is None else min(self.horizon, x + win.hi)
        out = []
        k = 0
        while True:
            y = x + Fraction(k, self.den)
            if y > hi or (win.hi is not None and y - x not in win):
                break
            for e in pta.out_edges[q]:
                try:
                    s2 = step(pta, State(q, x), Move(y - x, e))
                except Exception:
                    continue
                out.append((y - x, e, s2))
            k += 1
        return out

    def move_cost(self, cost, q, d, e):
        return d * cost.rate[q] + cost.discrete[e]

    # ---------------------------------------------------------------- liveness

    def _compute_live(self):
        """Classical regions of states having an infinite run, by sampling."""
        pta = self.pta
        m = pta.max_constant
        samples = []
        for i in range(m + 1):
            samples.append(Fraction(i))
            samples.append(Fraction(2 * i + 1, 2))
        nodes = {(q, k) for q in pta.locations for k in range(len(samples))
                 if samples[k] in pta.invariant[q]}

        def region_index(x):
            if x > m:
                return 2 * m + 1
            if x.denominator == 1:
                return 2 * int(x)
            return 2 * int(x) + 1

        succ = {}
        for q, k in nodes:
            x = samples[k]
            outs = set()
            # representative delays: to every later sample point (and staying)
            for j in range(k, len(samples)):
                y = samples[j]
                if y not in pta.invariant[q]:
                    break
                for e in pta.out_edges[q]:
                    edge = pta.edges[e]
                    if y in edge.guard:
                        y2 = Fraction(0) if edge.reset else y
                        if y2 in pta.invariant[edge.target]:
                            outs.add((edge.target, region_index(y2)))
            succ[(q, k)] = outs
        live = set(nodes)
        changed = True
        while changed:
            changed = False
            for n in list(live):
                if not (succ[n] & live):
                    live.discard(n)
                    changed = True
        self._region_index = region_index
        return live

    def is_live(self, q, x) -> bool:
        return (q, self._region_index(Fraction(x))) in self._live

    # ---------------------------------------------------------------- evaluation

    def eval(self, f, q, x, last_cost=None):
        """Three-valued truth of state formula f at (q, x)."""
        x = Fraction(x)
        if isinstance(f, Const):
            return f.value
        if isinstance(f, Atom):
            if f.name == HAS_PAID:
                return None if last_cost is None else last_cost > 0
            if f.name == CAN_HAVE_NOT_PAID:
                return None if last_cost is None else last_cost == 0
            return f.name in self.pta.labels[q]
        if isinstance(f, Not):
            return _not(self.eval(f.arg, q, x, last_cost))
        if isinstance(f, Or):
            return _or(self.eval(f.left, q, x, last_cost), self.eval(f.right, q, x, last_cost))
        key = (f, q, x)
        if key not in self._memo:
            self._memo[key] = None  # guards against re-entrance on cyclic evaluation
            self._memo[key] = self._eval_modal(f, q, x)
        return self._memo[key]

    def _eval_modal(self, f, q, x):
        if isinstance(f, EG):
            return _not(self.au(TRUE, Not(f.arg), None, ">=", 0, q, x))
        if isinstance(f, EGFalse):
            return _not(self.au(TRUE, TRUE, f.cost, f.op, f.c, q, x))
        if type(f) is AU:
            return self.au(f.left, f.right, f.cost, f.op, f.c, q, x)
        if isinstance(f, EU):
            return self.eu(f.left, f.right, f.cost, f.op, f.c, q, x)
        raise FormulaError(f"oracle cannot evaluate {f!r}")

    def eu(self, left, right, cost_name, op, c, q, x):
        """True if a grid run witnesses the until within the budget, else unknown."""
        cost = self.pta.cost(cost_name)
        cap = Fraction(c) + 1
        frontier = {(q, x, Fraction(0))}
        seen = set(frontier)
        for _ in range(self.b.depth):
            nxt = set()
            for q1, x1, p in frontier:
                for d, e, s2 in self.moves(q1, x1):
                    mc = self.move_cost(cost, q1, d, e)
                    p2 = min(p + mc, cap)
                    q2, x2 = s2.location, s2.clock
                    if _meets(p2, op, c) and self.is_live(q2, x2) and self.eval(right, q2, x2, mc) is True:
                        return True
                    if op in ("<", "<=", "=") and p2 > c:
                        continue
                    if self.eval(left, q2, x2, mc) is not True:
                        continue
                    key = (q2, x2, p2)
                    if key not in seen:
                        seen.add(key)
                        nxt.add(key)
            frontier = nxt
            if not frontier:
                break
        return None

    def au(self, left, right, cost_name, op, c, q, x):
        """False if a grid run (prefix or lasso) refutes the universal until, else unknown."""
        cost = self.pta.cost(cost_name)
        cap = Fraction(c) + 1
        best = {}
        stack = []

        def dfs(q1, x1, p, depth):
            for d, e, s2 in self.moves(q1, x1):
                mc = self.move_cost(cost, q1, d, e)
                p2 = min(p + mc, cap)
                q2, x2 = s2.location, s2.clock
                if not self.is_live(q2, x2):
                    continue
                r = self.eval(right, q2, x2, mc)
                if r is None:
                    continue
                if r and _meets(p2, op, c):
                    continue
                if op in ("<", "<=", "=") and p2 > c:
                    return True  # no later position can meet the bound
                lv = self.eval(left, q2, x2, mc)
                if lv is False:
                    return True
                if lv is None:
                    continue
                key = (q2, x2, p2)
                if key in stack:
                    i = stack.index(key)
                    loop = stack[i:]
                    if all(k[2] == p2 for k in loop):
                        return True  # zero-cost loop avoiding the goal forever
                    if op in (">=", ">") and all(self.eval(right, k[0], k[1]) is False for k in loop):
                        return True
                    continue
                if depth == 0 or best.get(key, -1) >= depth:
                    continue
                best[key] = depth
                stack.append(key)
                found = dfs(q2, x2, p2, depth - 1)
                stack.pop()
                if found:
                    return True
            return False

        stack.append((q, Fraction(x), Fraction(0)))
        return False if dfs(q, Fraction(x), Fraction(0), self.b.depth - 1) else None


def oracle_wctl(pta: OneClockPTA, formula, state=None, budget: OracleBudget = OracleBudget()):
    """True / False / None (unknown) for ``formula`` at ``state`` (default initial, 0)."""
    from ..wctl.engine import prepare

    f = prepare(pta, formula)
    q, x = state if state is not None else (pta.initial, 0)
    return Oracle(pta, budget).eval(f, q, Fraction(x))
