"""One-clock priced timed automata: data model, loading, and concrete semantics."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import yaml

from .intervals import Interval
from .rational import parse_rational, render
from .regions import Partition, RegionGraph, interval_contains


class ModelError(ValueError):
    """A model document that cannot be turned into a valid automaton."""


_ATOM = re.compile(r"^\s*x\s*(<=|>=|==|=|<|>)\s*(\d+)\s*$")


@dataclass(frozen=True)
class Guard:
    interval: Interval

    @staticmethod
    def true() -> "Guard":
        return Guard(Interval(Fraction(0), True, None, False))

    @staticmethod
    def parse(text) -> "Guard":
        if text is None:
            return Guard.true()
        s = str(text).strip()
        if s in ("", "true"):
            return Guard.true()
        lo, lc, hi, hc = Fraction(0), True, None, False
        for part in re.split(r"&&|&|\band\b|,", s):
            m = _ATOM.match(part)
            if not m:
                raise ModelError(f"cannot parse clock constraint {part.strip()!r}")
            op, k = m.group(1), Fraction(int(m.group(2)))
            if op in (">", ">=", "=", "=="):
                strict = op == ">"
                if k > lo or (k == lo and strict):
                    lo, lc = k, not strict
            if op in ("<", "<=", "=", "=="):
                strict = op == "<"
                if hi is None or k < hi or (k == hi and strict):
                    hi, hc = k, not strict
        iv = Interval.make(lo, lc, hi, hc)
        if iv is None:
            raise ModelError(f"empty guard {s!r}")
        return Guard(iv)

    def __contains__(self, x) -> bool:
        return x in self.interval

    def constants(self):
        out = {self.interval.lo}
        if self.interval.hi is not None:
            out.add(self.interval.hi)
        return out

    def __str__(self) -> str:
        iv = self.interval
        parts = []
        if iv.hi is not None and iv.lo == iv.hi:
            return f"x={render(iv.lo)}"
        if iv.lo > 0 or not iv.lo_closed:
            parts.append(f"x{'>=' if iv.lo_closed else '>'}{render(iv.lo)}")
        if iv.hi is not None:
            parts.append(f"x{'<=' if iv.hi_closed else '<'}{render(iv.hi)}")
        return " & ".join(parts) if parts else "true"


@dataclass(frozen=True)
class Edge:
    source: str
    guard: Guard
    reset: bool
    target: str


@dataclass(frozen=True)
class CostFunction:
    name: str
    rate: dict
    discrete: tuple  # indexed like OneClockPTA.edges

    def is_stopwatch(self) -> bool:
        return all(v in (0, 1) for v in self.rate.values())


@dataclass(frozen=True, eq=False)
class OneClockPTA:
    locations: tuple
    labels: dict
    initial: str
    edges: tuple
    invariant: dict
    costs: tuple
    out_edges: dict = field(init=False, repr=False)

    def __post_init__(self):
        out = {q: [] for q in self.locations}
        for i, e in enumerate(self.edges):
            out[e.source].append(i)
        object.__setattr__(self, "out_edges", {q: tuple(v) for q, v in out.items()})

    def cost(self, name: Optional[str] = None) -> CostFunction:
        if name is None:
            if len(self.costs) != 1:
                raise ModelError("several cost functions; name one explicitly")
            return self.costs[0]
        for c in self.costs:
            if c.name == name:
                return c
        raise ModelError(f"unknown cost function {name!r}")

    def has_cost(self, name) -> bool:
        return any(c.name == name for c in self.costs)

    @property
    def max_constant(self) -> int:
        consts = {Fraction(0)}
        for e in self.edges:
            consts |= e.guard.constants()
        for g in self.invariant.values():
            consts |= g.constants()
        return int(max(consts))

    def guard_constants(self) -> set:
        consts = set(range(self.max_constant + 1))
        return {Fraction(c) for c in consts}

    def classical(self) -> Partition:
        return Partition.classical(self.max_constant)

    def __repr__(self) -> str:
        return f"OneClockPTA({len(self.locations)} locations, {len(self.edges)} edges)"


# ---------------------------------------------------------------- loading


def _line_of(node, path):
    """Best-effort line number of a field inside a composed YAML tree."""
    cur = node
    for key in path:
        if cur is None:
            return None
        if isinstance(cur, yaml.MappingNode):
            nxt = None
            for k, v in cur.value:
                if k.value == key:
                    nxt = v
            cur = nxt
        elif isinstance(cur, yaml.SequenceNode) and isinstance(key, int) and key < len(cur.value):
            cur = cur.value[key]
        else:
            return None
    return None if cur is None else cur.start_mark.line + 1


class _Doc:
    def __init__(self, text):
        try:
            self.data = yaml.safe_load(text)
            self.tree = yaml.compose(text)
        except yaml.YAMLError as exc:
            raise ModelError(f"syntax error: {exc}") from exc

    def fail(self, path, msg):
        where = ".".join(str(p) if not isinstance(p, int) else f"[{p}]" for p in path).replace(".[", "[")
        line = _line_of(self.tree, path)
        loc = f"line {line}, " if line else ""
        raise ModelError(f"{loc}{where}: {msg}" if where else msg)


def _natural(doc, path, v):
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        doc.fail(path, f"expected a natural number, got {v!r}")
    return v


def load_model(text: str, *, check_blocking: bool = True) -> OneClockPTA:
    """Parse and validate a model document (YAML or JSON)."""
    doc = _Doc(text)
    data = doc.data
    if not isinstance(data, dict):
        raise ModelError("model document must be a mapping")
    locs = data.get("locations") or []
    if not locs:
        raise ModelError("no locations")
    cost_names = data.get("costs") or ["c"]
    if isinstance(cost_names, str):
        cost_names = [cost_names]
    names, labels, invariant = [], {}, {}
    rates = {c: {} for c in cost_names}
    for i, loc in enumerate(locs):
        if isinstance(loc, str):
            loc = {"name": loc}
        name = loc.get("name")
        if not name:
            doc.fail(["locations", i], "location without a name")
        if name in labels:
            doc.fail(["locations", i, "name"], f"duplicate location {name!r}")
        names.append(name)
        labels[name] = frozenset(loc.get("labels", [name]))
        try:
            invariant[name] = Guard.parse(loc.get("invariant"))
        except ModelError as exc:
            doc.fail(["locations", i, "invariant"], str(exc))
        iv = invariant[name].interval
        if iv.lo != 0 or not iv.lo_closed:
            doc.fail(["locations", i, "invariant"], "invariants must be upper bounds (x<k or x<=k)")
        rate = loc.get("rate", {})
        if not isinstance(rate, dict):
            rate = {cost_names[0]: rate} if len(cost_names) == 1 else None
            if rate is None:
                doc.fail(["locations", i, "rate"], "give one rate per cost function")
        for c in rate:
            if c not in rates:
                doc.fail(["locations", i, "rate", c], f"unknown cost function {c!r}")
        for c in cost_names:
            rates[c][name] = _natural(doc, ["locations", i, "rate", c], rate.get(c, 0))
    initial = data.get("initial", names[0])
    if initial not in labels:
        doc.fail(["initial"], f"unknown location {initial!r}")
    edges, discrete = [], {c: [] for c in cost_names}
    for i, e in enumerate(data.get("edges") or []):
        for key in ("from", "to"):
            if e.get(key) not in labels:
                doc.fail(["edges", i, key], f"unknown location {e.get(key)!r}")
        try:
            g = Guard.parse(e.get("guard"))
        except ModelError as exc:
            doc.fail(["edges", i, "guard"], str(exc))
        edges.append(Edge(e["from"], g, bool(e.get("reset", False)), e["to"]))
        cost = e.get("cost", {})
        if not isinstance(cost, dict):
            cost = {cost_names[0]: cost}
        for c in cost:
            if c not in discrete:
                doc.fail(["edges", i, "cost", c], f"unknown cost function {c!r}")
        for c in cost_names:
            discrete[c].append(_natural(doc, ["edges", i, "cost", c], cost.get(c, 0)))
    pta = OneClockPTA(
        locations=tuple(names),
        labels=labels,
        initial=initial,
        edges=tuple(edges),
        invariant=invariant,
        costs=tuple(CostFunction(c, rates[c], tuple(discrete[c])) for c in cost_names),
    )
    validate(pta, check_blocking=check_blocking)
    return pta


def validate(pta: OneClockPTA, *, check_blocking: bool = True) -> None:
    if 0 not in pta.invariant[pta.initial]:
        raise ModelError(f"initial state ({pta.initial}, x=0) violates its invariant")
    if check_blocking:
        witnesses = validate_nonblocking(pta)
        if witnesses:
            q, r = witnesses[0]
            raise ModelError(f"blocking at x={r.strip('{}')} in {q}" if r.startswith("{") else f"blocking in {q} on {r}")


def to_document(pta: OneClockPTA) -> dict:
    names = [c.name for c in pta.costs]
    return {
        "costs": names,
        "initial": pta.initial,
        "locations": [
            {
                "name": q,
                "labels": sorted(pta.labels[q]),
                "invariant": str(pta.invariant[q]),
                "rate": {c.name: c.rate[q] for c in pta.costs},
            }
            for q in pta.locations
        ],
        "edges": [
            {
                "from": e.source,
                "to": e.target,
                "guard": str(e.guard),
                "reset": e.reset,
                "cost": {c.name: c.discrete[i] for c in pta.costs},
            }
            for i, e in enumerate(pta.edges)
        ],
    }


def serialize(pta: OneClockPTA, fmt: str = "yaml") -> str:
    doc = to_document(pta)
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    return yaml.safe_dump(doc, sort_keys=False)


def same_model(a: OneClockPTA, b: OneClockPTA) -> bool:
    return to_document(a) == to_document(b)


def build(locations, edges, *, initial=None, costs=("c",), check_blocking=True) -> OneClockPTA:
    """Programmatic constructor taking the same shapes as the document schema."""
    doc = {"costs": list(costs), "locations": list(locations), "edges": list(edges)}
    if initial is not None:
        doc["initial"] = initial
    return load_model(json.dumps(doc), check_blocking=check_blocking)


# ---------------------------------------------------------------- semantics


def validate_nonblocking(pta: OneClockPTA) -> list:
    """Reachable classical region-states with neither a delay nor a discrete move."""
    rg = RegionGraph(pta, pta.classical())
    part = rg.part
    start = (pta.initial, 0)
    seen, stack, out = {start}, [start], []
    while stack:
        q, r = stack.pop()
        moves = rg.mixed_successors(q, r)
        instant = [m for m in moves if m[0] == r]
        if not instant and not rg.can_delay(q, r):
            out.append((q, part.label(r)))
        for s in rg.delay_targets(q, r):
            if (q, s) not in seen:
                seen.add((q, s))
                stack.append((q, s))
        for _, _, q2, r2 in moves:
            if (q2, r2) not in seen:
                seen.add((q2, r2))
                stack.append((q2, r2))
    return sorted(out)


@dataclass(frozen=True)
class State:
    location: str
    clock: Fraction

    def __str__(self):
        return f"({self.location},{render(self.clock)})"


@dataclass(frozen=True)
class Move:
    delay: Fraction
    edge: int


@dataclass(frozen=True)
class Run:
    start: State
    moves: tuple = ()

    def __len__(self):
        return len(self.moves)


class InvalidRun(ValueError):
    pass


def delay_window(pta: OneClockPTA, q: str, x) -> Interval:
    """Admissible delays from (q, x); raises if the state violates its invariant."""
    x = Fraction(x)
    inv = pta.invariant[q].interval
    if x not in inv:
        raise InvalidRun(f"state ({q},{render(x)}) violates invariant {pta.invariant[q]}")
    if inv.hi is None:
        return Interval(Fraction(0), True, None, False)
    return Interval(Fraction(0), True, inv.hi - x, inv.hi_closed)


def step(pta: OneClockPTA, s: State, mv: Move) -> State:
    win = delay_window(pta, s.location, s.clock)
    if mv.delay not in win:
        raise InvalidRun(f"delay {render(mv.delay)} leaves the invariant of {s.location}")
    e = pta.edges[mv.edge]
    if e.source != s.location:
        raise InvalidRun(f"edge {mv.edge} does not leave {s.location}")
    x = s.clock + mv.delay
    if x not in e.guard:
        raise InvalidRun(f"guard {e.guard} false at x={render(x)}")
    x2 = Fraction(0) if e.reset else x
    if x2 not in pta.invariant[e.target]:
        raise InvalidRun(f"target invariant {pta.invariant[e.target]} false at x={render(x2)}")
    return State(e.target, x2)


def states_of(pta: OneClockPTA, run: Run) -> list:
    out = [run.start]
    for i, mv in enumerate(run.moves):
        try:
            out.append(step(pta, out[-1], mv))
        except InvalidRun as exc:
            raise InvalidRun(f"move {i}: {exc}") from None
    return out


def move_cost(pta: OneClockPTA, cost: CostFunction, s: State, mv: Move) -> Fraction:
    return Fraction(mv.delay) * cost.rate[s.location] + cost.discrete[mv.edge]


def run_cost(pta: OneClockPTA, run: Run, cost: Optional[CostFunction] = None) -> Fraction:
    cost = cost or pta.cost()
    states = states_of(pta, run)
    return sum((move_cost(pta, cost, s, mv) for s, mv in zip(states, run.moves)), Fraction(0))


def delay_cost(pta: OneClockPTA, cost: CostFunction, q: str, t) -> Fraction:
    return Fraction(t) * cost.rate[q]


def enabled_moves(pta: OneClockPTA, state: State):
    """(admissible delays, edges enabled now) at a concrete state."""
    win = delay_window(pta, state.location, state.clock)
    now = []
    for i in pta.out_edges[state.location]:
        e = pta.edges[i]
        x2 = Fraction(0) if e.reset else state.clock
        if state.clock in e.guard and x2 in pta.invariant[e.target]:
            now.append(i)
    return win, tuple(now)


def region_graph(pta: OneClockPTA, part: Optional[Partition] = None) -> RegionGraph:
    return RegionGraph(pta, part or pta.classical())


__all__ = [
    "Guard", "Edge", "CostFunction", "OneClockPTA", "ModelError", "load_model", "serialize",
    "validate_nonblocking", "run_cost", "enabled_moves", "State", "Move", "Run", "InvalidRun",
    "build", "interval_contains",
]
