"""Bounded oracle for linear formulas on finite grid runs.

Runs of at most ``depth`` mixed moves with delays on the 1/den grid are
enumerated and the formula is evaluated on each of them directly from the
finite-run semantics.  A satisfying run proves the existential claim; finding
none proves nothing, so the answer is then UNKNOWN (None).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ..syntax import Atom, Const, FormulaError, Not, Or, Until, cost_names, parse_formula, resolve_costs
from .oracle import Oracle, OracleBudget, _meets


def _prepare(pta, formula, require_stopwatch=True):
    f = parse_formula(formula, "wmtl") if isinstance(formula, str) else formula
    f = resolve_costs(f, pta.costs[0].name if len(pta.costs) == 1 else None)
    names = cost_names(f)
    if len(names) > 1 or None in names:
        raise FormulaError("one named cost function expected")
    for n in names:
        if require_stopwatch and not pta.cost(n).is_stopwatch():
            raise FormulaError(f"cost {n!r} is not a stopwatch cost")
    return f


def holds_on_run(pta, f, states, moves, i: int = 0) -> bool:
    """Does the finite run (states[0], moves[0], states[1], ...) satisfy f at position i?

    ``moves[k]`` is (delay, edge) leading from states[k] to states[k+1].
    """
    n = len(states)
    if isinstance(f, str):
        f = parse_formula(f, "wmtl")
    f = resolve_costs(f, pta.costs[0].name if len(pta.costs) == 1 else None)

    def step_cost(name, k):
        d, e = moves[k]
        c = pta.cost(name)
        return d * c.rate[states[k][0]] + c.discrete[e]

    @lru_cache(maxsize=None)
    def ev(g, j):
        if isinstance(g, Const):
            return g.value
        if isinstance(g, Atom):
            return g.name in pta.labels[states[j][0]]
        if isinstance(g, Not):
            return not ev(g.arg, j)
        if isinstance(g, Or):
            return ev(g.left, j) or ev(g.right, j)
        if isinstance(g, Until):
            cost = Fraction(0)
            for k in range(j + 1, n):
                if g.cost is not None:
                    cost += step_cost(g.cost, k - 1)
                if ev(g.right, k) and _meets(cost, g.op, g.c):
                    return True
                if not ev(g.left, k):
                    return False
            return False
        raise FormulaError(f"not a linear formula: {g!r}")

    return ev(f, i)


def oracle_wmtl(pta, formula, state=None, budget: OracleBudget = OracleBudget(), *,
                require_stopwatch: bool = True):
    """True if some grid run of at most budget.depth moves satisfies the formula, else None."""
    f = _prepare(pta, formula, require_stopwatch)
    orc = Oracle(pta, budget)
    q, x = state if state is not None else (pta.initial, 0)
    x = Fraction(x)
    if x not in pta.invariant[q]:
        return None
    states, moves = [(q, x)], []

    def dfs(depth):
        if holds_on_run(pta, f, states, moves):
            return True
        if depth == 0:
            return False
        q, x = states[-1]
        for d, e, s2 in orc.moves(q, x):
            states.append((s2.location, s2.clock))
            moves.append((d, e))
            found = dfs(depth - 1)
            states.pop()
            moves.pop()
            if found:
                return True
        return False

    return True if dfs(budget.depth) else None
