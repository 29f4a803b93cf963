"""Bounded witness search for constrained untils.

The search walks the cost graph depth first from a start state, carrying the
interval of achievable costs along the current path (saturated at c+1) and
visiting each graph node at most N = floor(c*C^n/s)+2 times on a path, where
s is the smallest positive cost of the automaton.  It is independent of the
backward fixpoint used by the labeler, so the two cross-check each other.

A found path is turned into a concrete run: a total cost is chosen in the
final interval, split over the path edges, and every edge is realised by
explicit delays and zero-cost moves inside its region.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Optional

from ..intervals import Interval, IntervalSet, constraint_set, saturate
from ..model import Move, OneClockPTA, Run, State, run_cost, states_of
from ..syntax import EU, AU, Const, constrained_height
from .costgraph import CostGraph, SourceEdge
from .granularity import rate_lcm
from .rewrite import rewrite


@dataclass
class Witness:
    nodes: list  # cost-graph nodes of the abstract path
    cost: Interval  # achievable costs of the abstract path, exit move included
    run: Optional[Run]  # concrete run on the original automaton, None if realisation failed
    value: Optional[Fraction] = None  # cost of the concrete run


def visit_bound(pta: OneClockPTA, cost_name, c, n: int) -> int:
    cost = pta.cost(cost_name)
    positive = [r for r in cost.rate.values() if r > 0] + [k for k in cost.discrete if k > 0]
    if not positive:
        return 2
    C = rate_lcm(pta, [cost.name])
    return floor(Fraction(c) * C ** n / min(positive)) + 2


def _add(a: Interval, b: Interval) -> Interval:
    hi = None if a.hi is None or b.hi is None else a.hi + b.hi
    return Interval(a.lo + b.lo, a.lo_closed and b.lo_closed, hi, hi is not None and a.hi_closed and b.hi_closed)


def _pick(iv: Interval) -> Fraction:
    if iv.is_point():
        return iv.lo
    if iv.hi is None:
        return iv.lo if iv.lo_closed else iv.lo + 1
    return (iv.lo + iv.hi) / 2


def _reflect(t, iv: Interval) -> IntervalSet:
    """{t - v : v in iv} within [0, +inf)."""
    lo, lc = (Fraction(0), True) if iv.hi is None else (t - iv.hi, iv.hi_closed)
    if lo < 0:
        lo, lc = Fraction(0), True
    return IntervalSet([iv2] if (iv2 := Interval.make(lo, lc, t - iv.lo, iv.lo_closed)) else [])


# ------------------------------------------------------------------ search


def witness_search(pta: OneClockPTA, formula, state=None, labeler=None) -> Optional[Witness]:
    """A witness run of an existential until at ``state`` (default: initial, 0), or None."""
    from .engine import Labeler, prepare

    f = prepare(pta, formula)
    core = rewrite(f)
    if isinstance(core, Const):
        if core.value:
            raise ValueError("formula simplifies to true; there is no until to witness")
        return None
    if type(core) is not EU or type(f) is AU:
        raise ValueError("witness search needs an existential until")
    lab = labeler or Labeler(pta)
    c, op = Fraction(core.c), core.op
    cache = lab.__dict__.setdefault("_witness_graphs", {})
    if core not in cache:
        s1, s2 = lab.sat(core.left), lab.sat(core.right)
        cache[core] = (s1, s2) + lab.eu_graph(s1, s2, core.cost, c)
    s1, s2, inst, g, exits = cache[core]
    q, x = state if state is not None else (pta.initial, 0)
    x = Fraction(x)
    q0 = next(l for l in inst.pta.locations if inst.origin[l] == q and inst.offset.get(l, 0) == 0)
    n = constrained_height(core)
    bound = visit_bound(pta, core.cost, c, n)
    found = _search(g, exits, q0, x, op, c, bound)
    if found is None:
        return None
    edges, exit_move, total = found
    nodes = [e[1] for e in edges]
    run, value = _concretise(pta, inst, g, q, q0, x, edges, exit_move, total, op, c)
    if run is not None:
        _verify(pta, run, s1, s2, core.cost, op, c, lab)
    return Witness(nodes, total, run, value)


def _search(g: CostGraph, exits: dict, q0, x, op, c, bound):
    part = g.part
    r = part.region_of(x)
    if not g.inv_ok(q0, r):
        return None
    cap = c + 1
    goal = constraint_set(op, c)
    if r % 2 == 0:
        first = [(("point", None), (q0, r), IntervalSet.point(0))]
    else:
        first = [((se.kind, se), se.target, se.at(part, r, x)) for se in g.source_edges(q0, r)]

    def out_edges(node):
        for dst, lab, kind in g.edges.get(node, ()):
            yield (kind, node), dst, lab

    def accepts(node, iv):
        for e, v in exits.get(node, ()):
            if _meets(iv, v, goal, cap):
                return e, v
        return None

    # explicit stack: frames (node, interval, iterator over outgoing choices)
    best = {}
    path = []  # (edge descriptor, node, chosen component, interval after)
    visits = {}

    def choices(items):
        for desc, dst, lab in items:
            for J in lab:
                yield desc, dst, J

    stack = [(None, None, Interval.point(0), choices(first))]
    while stack:
        _, node, iv, it = stack[-1]
        step = next(it, None)
        if step is None:
            stack.pop()
            if path:
                _, done, _, _ = path.pop()
                visits[done] -= 1
            continue
        desc, dst, J = step
        iv2 = saturate(IntervalSet([_add(iv, J)]), cap).items[0]
        k = visits.get(dst, 0)
        if k >= bound:
            continue
        key = (dst, iv2)
        if key in best and best[key] <= k:
            continue
        best[key] = k
        visits[dst] = k + 1
        path.append((desc, dst, J, iv2))
        hit = accepts(dst, iv2)
        if hit is not None:
            edges = [(d, nd, comp) for d, nd, comp, _ in path]
            total = Interval.point(0)
            for _, _, comp in edges:
                total = _add(total, comp)
            total = _add(total, Interval.point(hit[1]))
            return edges, hit, total
        stack.append((desc, dst, iv2, choices(out_edges(dst))))
    return None


def _meets(iv: Interval, v, goal: IntervalSet, cap) -> bool:
    shifted = saturate(IntervalSet([_add(iv, Interval.point(v))]), cap)
    return bool(shifted.intersect(goal))


# ------------------------------------------------------------------ concretisation


class _Builder:
    def __init__(self, g: CostGraph, loc, x):
        self.g = g
        self.loc = loc
        self.x = Fraction(x)
        self.pending = Fraction(0)
        self.moves = []

    def wait(self, d):
        self.pending += d
        self.x += d

    def fire(self, e):
        self.moves.append(Move(self.pending, e))
        self.pending = Fraction(0)
        edge = self.g.pta.edges[e]
        self.loc = edge.target
        if edge.reset:
            self.x = Fraction(0)

    def edge_to(self, target, region, *, reset=False, discrete=0):
        g = self.g
        for e in g.pta.out_edges[self.loc]:
            edge = g.pta.edges[e]
            if edge.target == target and edge.reset == reset and g.cost.discrete[e] == discrete \
                    and g.lands(e, region) is not None:
                return e
        return None

    def walk(self, seq, region):
        """Fire zero-cost edges along the location sequence seq (seq[0] is the current one)."""
        for b in seq[1:]:
            e = self.edge_to(b, region)
            if e is None:
                raise _Unrealisable(f"no edge {self.loc}->{b} on region {region}")
            self.fire(e)


class _Unrealisable(Exception):
    pass


def _bfs(adj: dict, a, b):
    prev = {a: None}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        if u == b:
            out = [u]
            while prev[out[-1]] is not None:
                out.append(prev[out[-1]])
            return out[::-1]
        for v in adj.get(u, ()):
            if v not in prev:
                prev[v] = u
                queue.append(v)
    return None


def _durations(rates, required, T, value):
    """Nonnegative durations summing to T with sum(rate*d) = value; required ones positive."""
    T, value = Fraction(T), Fraction(value)
    idx = range(len(rates))
    if T == 0:
        return [Fraction(0)] * len(rates) if value == 0 and not required else None
    lo = min(idx, key=lambda i: rates[i])
    hi = max(idx, key=lambda i: rates[i])
    k = len(required)
    attempts = [Fraction(0)] if k == 0 else [T / (2 ** j * (k + 1)) for j in range(1, 80)]
    for delta in attempts:
        d = [delta if i in required else Fraction(0) for i in idx]
        rest = T - k * delta
        val = value - delta * sum(rates[i] for i in required)
        if rates[hi] == rates[lo]:
            if val != rates[lo] * rest:
                continue
            d[lo] += rest
            return d
        t_hi = (val - rates[lo] * rest) / (rates[hi] - rates[lo])
        if 0 <= t_hi <= rest:
            d[hi] += t_hi
            d[lo] += rest - t_hi
            return d
    return None


def _sequences(g: CostGraph, adj: dict, firsts, ends):
    """Location sequences first ~> u ~> v ~> end through the interior moves."""
    seen = set()
    for s0 in firsts:
        for u in CostGraph.closure(adj, [s0]):
            for v in CostGraph.closure(adj, [u]):
                for end in CostGraph.closure(adj, [v]):
                    if end not in ends:
                        continue
                    a, b, cc = _bfs(adj, s0, u), _bfs(adj, u, v), _bfs(adj, v, end)
                    seq = tuple(a + b[1:] + cc[1:])
                    if seq not in seen:
                        seen.add(seq)
                        yield seq


def _strip(b: _Builder, o: int, from_point: bool, mode: str, target, value):
    """Realise crossing (part of) open region o at cost ``value``.

    mode "right": end in ``target`` at the right milestone; "inside": end in
    ``target`` somewhere inside o.
    """
    g, part = b.g, b.g.part
    adj = g.interior_adj(o)
    value = Fraction(value)
    point_path = {}
    if from_point:
        p0 = o - 1
        inst = g.instant_adj(p0)
        for s in CostGraph.closure(inst, [b.loc]):
            if g.inv_ok(s, o):
                point_path[s] = _bfs(inst, b.loc, s)
        firsts = list(point_path)
    else:
        firsts = [b.loc] if b.loc in adj else []
    top = part.upper(o)
    if mode == "right":
        p = o + 1
        inst_p = g.instant_adj(p)
        ends = {s for s in adj if g.inv_ok(s, p) and s in inst_p and target in CostGraph.closure(inst_p, [s])}
    else:
        ends = {target} if target in adj else set()
    for seq in _sequences(g, adj, firsts, ends):
        rates = [g.rate[s] for s in seq]
        required = set()
        if len(seq) > 1:
            if from_point:
                required.add(0)
            if mode == "right":
                required.add(len(seq) - 1)
        if mode == "right":
            spans = [top - b.x]
        else:
            spans = _spans(rates, value, b.x, top, allow_zero=not from_point)
        for T in spans:
            if mode == "right" and from_point and len(seq) == 1:
                required = {0}
            d = _durations(rates, required, T, value)
            if d is None:
                continue
            if from_point:
                b.walk(point_path[seq[0]], o - 1)
            for i, s in enumerate(seq):
                b.wait(d[i])
                if i + 1 < len(seq):
                    b.walk([s, seq[i + 1]], o)
            if mode == "right":
                b.walk(_bfs(g.instant_adj(o + 1), b.loc, target), o + 1)
            return
    raise _Unrealisable(f"cannot cross region {part.label(o)} into {target} at cost {value}")


def _spans(rates, value, x0, top, allow_zero):
    """Candidate durations for stopping inside the region."""
    rl, rh = min(rates), max(rates)
    limit = None if top is None else top - x0
    if value == 0:
        lo, hi = Fraction(0), (limit if rl == 0 else Fraction(0))
    else:
        if rh == 0:
            return []
        lo = value / rh
        hi = value / rl if rl > 0 else None
    if hi is None:
        hi = lo * 2 + 1 if limit is None else limit
    if limit is not None:
        hi = min(hi, limit)
    cands = [lo + (hi - lo) * Fraction(k, 8) for k in (4, 1, 7, 0, 8)]
    if value == 0 and hi == 0:
        cands = [Fraction(0)]
    out = []
    for T in cands:
        if T < 0 or (limit is not None and T >= limit) or (T == 0 and not allow_zero):
            continue
        if T not in out:
            out.append(T)
    return out


def _concretise(pta, inst, g: CostGraph, q, q0, x, edges, exit_move, total: Interval, op, c):
    goal = constraint_set(op, c)
    final = IntervalSet([total]).intersect(goal)
    if not final:
        return None, None
    t = _pick(final.items[0])
    comps = [comp for _, _, comp in edges]
    # suffix sums of the remaining components (the exit value included)
    suffix = [Interval.point(exit_move[1])]
    for comp in reversed(comps):
        suffix.append(_add(comp, suffix[-1]))
    suffix = suffix[::-1]  # suffix[i] = comps[i:] + exit
    values = []
    remaining = t
    for i, comp in enumerate(comps):
        allowed = _reflect(remaining, suffix[i + 1]).intersect(IntervalSet([comp]))
        if not allowed:
            return None, None
        v = _pick(allowed.items[0])
        values.append(v)
        remaining -= v
    b = _Builder(g, q0, x)
    part = g.part
    try:
        for ((kind, info), dst, _), v in zip(edges, values):
            src_region = part.region_of(b.x)
            if kind == "point":
                continue
            if isinstance(info, SourceEdge):
                if kind == "milestone":
                    _strip(b, src_region, False, "right", dst[0], v)
                else:
                    _strip(b, src_region, False, "inside", dst[0], v)
                continue
            src = info
            if kind in ("instant", "reset"):
                e = b.edge_to(dst[0], src[1], reset=(kind == "reset"), discrete=v)
                if e is None:
                    raise _Unrealisable(f"no {kind} edge {src} -> {dst}")
                b.fire(e)
            elif kind == "milestone":
                _strip(b, src[1] + 1, True, "right", dst[0], v)
            else:  # "open" or "top"
                _strip(b, src[1] + 1, True, "inside", dst[0], v)
        b.fire(exit_move[0])
    except _Unrealisable:
        return None, None
    nbase = len(pta.edges)
    moves = tuple(Move(m.delay, m.edge % nbase) for m in b.moves)
    run = Run(State(q, Fraction(x)), moves)
    return run, run_cost(pta, run, pta.cost(g.cost.name))


def _verify(pta, run, s1, s2, cost_name, op, c, lab):
    states = states_of(pta, run)
    value = run_cost(pta, run, pta.cost(cost_name))
    if not IntervalSet.point(value).intersect(constraint_set(op, c)):
        raise AssertionError(f"witness cost {value} misses the bound {op}{c}")
    for s in states[1:-1]:
        if not s1.holds(s.location, s.clock):
            raise AssertionError(f"witness leaves the left operand at {s}")
    last = states[-1]
    if not (s2.holds(last.location, last.clock) and lab.live().holds(last.location, last.clock)):
        raise AssertionError(f"witness ends outside the right operand at {last}")
