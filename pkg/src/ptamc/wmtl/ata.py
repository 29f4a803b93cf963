"""Translation of linear formulas into one-variable alternating automata.

Formulas are first put in negation normal form, with the dual of the until
("release") introduced for negated untils.  Every temporal subformula gets
one location.  An until location is a pending obligation: it is discharged
when a later position satisfies the right operand with the variable (the
cost since the obligation was created) meeting the constraint, and it keeps
itself alive while the left operand holds.  Release locations are accepting,
until locations are not, so a finite run may end only once every pending
until is discharged.

Transition formulas are positive boolean formulas over
``("loc", name, reset)`` atoms and variable guards ``("x", op, c)``; their
literals ``("lit", atom, polarity)`` read the letter of the position.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from ..syntax import Atom, Const, FormulaError, Not, Or, Until, parse_formula

TRUE_F = ("T",)
FALSE_F = ("F",)


# ------------------------------------------------------------------ NNF


@dataclass(frozen=True)
class Lit:
    name: str
    positive: bool = True


@dataclass(frozen=True)
class NAnd:
    left: object
    right: object


@dataclass(frozen=True)
class NOr:
    left: object
    right: object


@dataclass(frozen=True)
class NUntil:
    left: object
    right: object
    op: str
    c: int


@dataclass(frozen=True)
class NRelease:
    """Dual until: every later position meeting the constraint satisfies right,
    unless left held strictly earlier."""

    left: object
    right: object
    op: str
    c: int


def nnf(f, positive: bool = True):
    if isinstance(f, Const):
        return Const(f.value == positive)
    if isinstance(f, Atom):
        return Lit(f.name, positive)
    if isinstance(f, Not):
        return nnf(f.arg, not positive)
    if isinstance(f, Or):
        a, b = nnf(f.left, positive), nnf(f.right, positive)
        return NOr(a, b) if positive else NAnd(a, b)
    if isinstance(f, Until):
        a, b = nnf(f.left, positive), nnf(f.right, positive)
        return NUntil(a, b, f.op, f.c) if positive else NRelease(a, b, f.op, f.c)
    raise FormulaError(f"not a linear formula: {f!r}")


_NEG = {"<": ">=", "<=": ">", ">=": "<", ">": "<="}


def _guard(op, c, positive=True):
    if positive:
        if op == ">=" and c == 0:
            return TRUE_F
        return ("x", op, c)
    if op == ">=" and c == 0:
        return FALSE_F
    if op == "=":
        return _or(("x", "<", c), ("x", ">", c))
    return ("x", _NEG[op], c)


def _and(a, b):
    if a == FALSE_F or b == FALSE_F:
        return FALSE_F
    if a == TRUE_F:
        return b
    if b == TRUE_F:
        return a
    return ("and", a, b)


def _or(a, b):
    if a == TRUE_F or b == TRUE_F:
        return TRUE_F
    if a == FALSE_F:
        return b
    if b == FALSE_F:
        return a
    return ("or", a, b)


# ------------------------------------------------------------------ automaton


@dataclass
class ATA:
    locations: tuple
    accepting: frozenset
    initial: tuple  # transition formula read on the first letter
    delta: dict  # location -> transition formula read on every later letter
    kinds: dict = field(default_factory=dict)  # location -> "until" | "release"
    subformula: dict = field(default_factory=dict)
    constants: frozenset = frozenset()

    def describe(self) -> list:
        out = []
        for loc in self.locations:
            tag = " (accepting)" if loc in self.accepting else ""
            out.append(f"{loc}{tag}: {render_pbf(self.delta[loc])}")
        return out

    def to_dot(self) -> str:
        lines = ["digraph ATA {", "  rankdir=LR;"]
        for loc in self.locations:
            shape = "doublecircle" if loc in self.accepting else "circle"
            lines.append(f'  "{loc}" [shape={shape}];')
        lines.append('  init [shape=point];')
        for loc, _ in _targets(self.initial):
            lines.append(f'  init -> "{loc}";')
        for loc in self.locations:
            for tgt, reset in sorted(_targets(self.delta[loc])):
                lab = "x:=0" if reset else ""
                lines.append(f'  "{loc}" -> "{tgt}" [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _targets(pbf) -> set:
    if pbf[0] == "loc":
        return {(pbf[1], pbf[2])}
    if pbf[0] in ("and", "or"):
        return _targets(pbf[1]) | _targets(pbf[2])
    return set()


def to_ata(formula, default_cost: Optional[str] = None) -> ATA:
    """One location per temporal subformula, numbered l1, l2, ... in preorder."""
    f = parse_formula(formula, "wmtl") if isinstance(formula, str) else formula
    g = nnf(f)
    names, kinds, sub, delta = {}, {}, {}, {}
    consts = set()

    def number(h):
        if isinstance(h, (NUntil, NRelease)):
            if h not in names:
                names[h] = f"l{len(names) + 1}"
                consts.add(h.c)
            number(h.left)
            number(h.right)
        elif isinstance(h, (NAnd, NOr)):
            number(h.left)
            number(h.right)

    number(g)

    def now(h):
        """Formula for "h holds at the position being read"."""
        if isinstance(h, Const):
            return TRUE_F if h.value else FALSE_F
        if isinstance(h, Lit):
            return ("lit", h.name, h.positive)
        if isinstance(h, NAnd):
            return _and(now(h.left), now(h.right))
        if isinstance(h, NOr):
            return _or(now(h.left), now(h.right))
        return ("loc", names[h], True)

    for h, loc in names.items():
        keep = ("loc", loc, False)
        if isinstance(h, NUntil):
            delta[loc] = _or(_and(now(h.right), _guard(h.op, h.c)), _and(now(h.left), keep))
            kinds[loc] = "until"
        else:
            delta[loc] = _and(_or(now(h.right), _guard(h.op, h.c, False)), _or(now(h.left), keep))
            kinds[loc] = "release"
        sub[loc] = h
    locs = tuple(sorted(names.values(), key=lambda s: int(s[1:])))
    acc = frozenset(l for l in locs if kinds[l] == "release")
    return ATA(locs, acc, now(g), delta, kinds, sub, frozenset(consts))


# ------------------------------------------------------------------ evaluation


def guard_holds(op, c, reg, frac0: bool) -> bool:
    """Does x op c hold for a value with integer part reg (None above M) and the given fractional status?"""
    if reg is None:
        return op in (">", ">=")
    if frac0:
        v = (reg, 0)
    else:
        v = (reg, 1)  # strictly between reg and reg+1
    cv = (c, 0)
    return {"<": v < cv, "<=": v <= cv, "=": v == cv, ">=": v >= cv, ">": v > cv}[op]


def models(pbf, letter: frozenset, reg=0, frac0=True) -> list:
    """Minimal sets of (location, reset) atoms satisfying pbf on the letter and variable region."""
    out = _dnf(pbf, letter, reg, frac0)
    out = sorted(set(out), key=len)
    minimal = []
    for m in out:
        if not any(k <= m for k in minimal):
            minimal.append(m)
    return minimal


def _dnf(p, letter, reg, frac0) -> list:
    kind = p[0]
    if kind == "T":
        return [frozenset()]
    if kind == "F":
        return []
    if kind == "lit":
        return [frozenset()] if (p[1] in letter) == p[2] else []
    if kind == "x":
        return [frozenset()] if guard_holds(p[1], p[2], reg, frac0) else []
    if kind == "loc":
        return [frozenset([(p[1], p[2])])]
    a = _dnf(p[1], letter, reg, frac0)
    b = _dnf(p[2], letter, reg, frac0)
    if kind == "or":
        return a + b
    return [x | y for x, y in product(a, b)]


def render_pbf(p) -> str:
    kind = p[0]
    if kind == "T":
        return "true"
    if kind == "F":
        return "false"
    if kind == "lit":
        return p[1] if p[2] else f"!{p[1]}"
    if kind == "x":
        return f"x{p[1]}{p[2]}"
    if kind == "loc":
        return f"{p[1]}[x:=0]" if p[2] else p[1]
    sym = " & " if kind == "and" else " | "
    return "(" + render_pbf(p[1]) + sym + render_pbf(p[2]) + ")"
