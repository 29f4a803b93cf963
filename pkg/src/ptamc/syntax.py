"""Formula ASTs and the shared parser for the branching and linear logics.

Sugar is expanded while parsing: ``and``/``=>`` become negations and
disjunctions, ``EF/AF/EG/AG`` become until formulas, and an omitted cost
constraint means ``>= 0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

OPS = ("<", "<=", "=", ">=", ">")


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Atom:
    name: str
    cost: Optional[str] = None  # only for the move atoms has_paid / can_have_not_paid


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class EU:
    left: object
    right: object
    cost: Optional[str] = None
    op: str = ">="
    c: int = 0

    @property
    def constrained(self) -> bool:
        return not (self.op == ">=" and self.c == 0)


@dataclass(frozen=True)
class AU(EU):
    pass


@dataclass(frozen=True)
class EG:
    """Unconstrained existential globally (core fragment only)."""

    arg: object


@dataclass(frozen=True)
class EGFalse:
    """E G{op c} false for op in >=, =, >."""

    cost: Optional[str]
    op: str
    c: int


@dataclass(frozen=True)
class Until:
    """Linear-time until (no path quantifier)."""

    left: object
    right: object
    cost: Optional[str] = None
    op: str = ">="
    c: int = 0

    @property
    def constrained(self) -> bool:
        return not (self.op == ">=" and self.c == 0)


TRUE = Const(True)
FALSE = Const(False)
HAS_PAID = "has_paid"
CAN_HAVE_NOT_PAID = "can_have_not_paid"


def And(a, b):
    return Not(Or(Not(a), Not(b)))


def Implies(a, b):
    return Or(Not(a), b)


def neg(f):
    """Negation that removes double negations."""
    if isinstance(f, Not):
        return f.arg
    if isinstance(f, Const):
        return Const(not f.value)
    return Not(f)


def conj(*fs):
    out = None
    for f in fs:
        out = f if out is None else And(out, f)
    return out if out is not None else TRUE


def disj(*fs):
    out = None
    for f in fs:
        out = f if out is None else Or(out, f)
    return out if out is not None else FALSE


def EF(f, cost=None, op=">=", c=0):
    return EU(TRUE, f, cost, op, c)


def AF(f, cost=None, op=">=", c=0):
    return AU(TRUE, f, cost, op, c)


def EGc(f, cost=None, op=">=", c=0):
    """E G{op c} f as the dual of A F{op c} !f."""
    return Not(AU(TRUE, neg(f), cost, op, c))


def AG(f, cost=None, op=">=", c=0):
    return Not(EU(TRUE, neg(f), cost, op, c))


# ------------------------------------------------------------------ lexer

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_.']*)|(?P<op><=|>=|==|=>|->|!=|[<>=!|&(){}\[\]~,]))"
)
_KEYWORDS = {"E", "A", "U", "EF", "AF", "EG", "AG", "F", "G", "true", "false", "and", "or", "not"}


def _tokens(text: str):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise FormulaError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        kind = m.lastgroup
        val = m.group(kind)
        if kind == "op":
            val = {"==": "=", "->": "=>", "~": "!"}.get(val, val)
        if kind == "id" and val in ("and", "or", "not"):
            kind, val = "op", {"and": "&", "or": "|", "not": "!"}[val]
        out.append((kind, val))
    out.append(("end", None))
    return out


@dataclass(frozen=True)
class _PathU:
    left: object
    right: object
    cost: Optional[str]
    op: str
    c: int


class _Parser:
    def __init__(self, text: str, logic: str):
        self.toks = _tokens(text)
        self.i = 0
        self.logic = logic

    def peek(self, k=0):
        return self.toks[self.i + k]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, val):
        t = self.take()
        if t[1] != val:
            raise FormulaError(f"expected {val!r}, found {t[1]!r}")
        return t

    def is_kw(self, val, k=0):
        kind, v = self.peek(k)
        return kind == "id" and v == val

    def parse(self):
        f = self.implies()
        if self.peek()[0] != "end":
            raise FormulaError(f"trailing input at {self.peek()[1]!r}")
        return self.finish(f)

    def finish(self, f):
        if isinstance(f, _PathU):
            if self.logic == "wmtl":
                return Until(f.left, f.right, f.cost, f.op, f.c)
            raise FormulaError("until without a path quantifier E or A")
        return f

    def implies(self):
        left = self.disj()
        if self.peek()[1] == "=>":
            self.take()
            return Implies(self.finish(left), self.finish(self.implies()))
        return left

    def disj(self):
        left = self.conj()
        while self.peek()[1] == "|":
            self.take()
            left = Or(self.finish(left), self.finish(self.conj()))
        return left

    def conj(self):
        left = self.until()
        while self.peek()[1] == "&":
            self.take()
            left = And(self.finish(left), self.finish(self.until()))
        return left

    def until(self):
        left = self.unary()
        if self.is_kw("U"):
            self.take()
            cost, op, c = self.constraint()
            right = self.until()
            return _PathU(self.finish(left), self.finish(right), cost, op, c)
        return left

    def constraint(self):
        if self.peek()[1] not in ("{", "["):
            return None, ">=", 0
        # "[" only opens a constraint when followed by a comparison
        if self.peek()[1] == "[":
            nxt = self.peek(1)
            if not (nxt[1] in OPS or (nxt[0] == "id" and self.peek(2)[1] in OPS)):
                return None, ">=", 0
        close = "}" if self.take()[1] == "{" else "]"
        cost = None
        if self.peek()[0] == "id":
            cost = self.take()[1]
        kind, op = self.take()
        if op not in OPS:
            raise FormulaError(f"unknown comparison {op!r}")
        kind, num = self.take()
        if kind != "num":
            raise FormulaError(f"cost bound must be a natural number, found {num!r}")
        self.expect(close)
        return cost, op, int(num)

    def unary(self):
        kind, v = self.peek()
        if v in ("!",):
            self.take()
            return Not(self.finish(self.unary()))
        if v in ("(", "["):
            self.take()
            f = self.implies()
            self.expect(")" if v == "(" else "]")
            return f
        if kind == "num":
            raise FormulaError(f"unexpected number {v}")
        if kind != "id":
            raise FormulaError(f"unexpected token {v!r}")
        if v in ("true", "false"):
            self.take()
            return Const(v == "true")
        if v in ("E", "A") and self.logic == "wctl":
            self.take()
            body = self.until()
            if not isinstance(body, _PathU):
                raise FormulaError(f"{v} must be followed by an until formula")
            cls = EU if v == "E" else AU
            return cls(body.left, body.right, body.cost, body.op, body.c)
        if v in ("EF", "AF", "EG", "AG") and self.logic == "wctl":
            self.take()
            cost, op, c = self.constraint()
            arg = self.finish(self.unary())
            return {"EF": EF, "AF": AF, "EG": EGc, "AG": AG}[v](arg, cost, op, c)
        if v in ("F", "G") and self.logic == "wmtl":
            self.take()
            cost, op, c = self.constraint()
            arg = self.finish(self.unary())
            if v == "F":
                return Until(TRUE, arg, cost, op, c)
            return Not(Until(TRUE, neg(arg), cost, op, c))
        if v in _KEYWORDS and not (self.logic == "wmtl" and v in ("E", "A", "EF", "AF", "EG", "AG")):
            raise FormulaError(f"unknown operator {v!r} here")
        self.take()
        return Atom(v)


def parse_formula(text: str, logic: str = "wctl"):
    if logic not in ("wctl", "wmtl"):
        raise FormulaError(f"unknown logic {logic!r}")
    return _Parser(text, logic).parse()


# ------------------------------------------------------------------ printing


def _cons(f) -> str:
    if not f.constrained:
        return ""
    return "{" + (f.cost or "") + f.op + str(f.c) + "}"


def to_text(f) -> str:
    """Render with sugar restored where the pattern is recognisable."""
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f.name if f.cost is None else f"{f.name}"
    if isinstance(f, Not):
        a = f.arg
        if isinstance(a, Or) and isinstance(a.left, Not) and isinstance(a.right, Not):
            return f"({to_text(a.left.arg)} & {to_text(a.right.arg)})"
        if isinstance(a, EU) and not isinstance(a, AU) and a.left == TRUE:
            return f"AG{_cons(a)} {_wrap(neg(a.right))}"
        if isinstance(a, AU) and a.left == TRUE:
            return f"EG{_cons(a)} {_wrap(neg(a.right))}"
        if isinstance(a, Until) and a.left == TRUE:
            return f"G{_cons(a)} {_wrap(neg(a.right))}"
        return f"!{_wrap(a)}"
    if isinstance(f, Or):
        if isinstance(f.left, Not):
            return f"({to_text(f.left.arg)} => {to_text(f.right)})"
        return f"({to_text(f.left)} | {to_text(f.right)})"
    if isinstance(f, EGFalse):
        return "EG{" + (f.cost or "") + f.op + str(f.c) + "} false"
    if isinstance(f, EG):
        return f"EG {_wrap(f.arg)}"
    if isinstance(f, (EU, Until)):
        q = "" if isinstance(f, Until) else ("A" if isinstance(f, AU) else "E")
        if f.left == TRUE:
            return f"{q}F{_cons(f)} {_wrap(f.right)}"
        return f"{q} {_wrap(f.left)} U{_cons(f)} {_wrap(f.right)}".lstrip()
    raise TypeError(f"not a formula: {f!r}")


def _wrap(f) -> str:
    s = to_text(f)
    if isinstance(f, (Atom, Const)) or s.startswith("("):
        return s
    return f"({s})"


def constrained_height(f) -> int:
    if isinstance(f, (Const, Atom)):
        return 0
    if isinstance(f, (Not, EG)):
        return constrained_height(f.arg)
    if isinstance(f, Or):
        return max(constrained_height(f.left), constrained_height(f.right))
    if isinstance(f, EGFalse):
        return 1
    if isinstance(f, (EU, Until)):
        inner = max(constrained_height(f.left), constrained_height(f.right))
        return inner + (1 if f.constrained else 0)
    raise TypeError(f"not a formula: {f!r}")


def atoms(f) -> set:
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, Const) or isinstance(f, EGFalse):
        return set()
    if isinstance(f, (Not, EG)):
        return atoms(f.arg)
    return atoms(f.left) | atoms(f.right)


def cost_names(f) -> set:
    if isinstance(f, (Const,)):
        return set()
    if isinstance(f, Atom):
        return {f.cost} if f.cost else set()
    if isinstance(f, EGFalse):
        return {f.cost}
    if isinstance(f, (Not, EG)):
        return cost_names(f.arg)
    out = cost_names(f.left) | cost_names(f.right)
    if isinstance(f, (EU, Until)) and f.constrained:
        out.add(f.cost)
    return out


def constants(f) -> set:
    if isinstance(f, (Const, Atom)):
        return set()
    if isinstance(f, EGFalse):
        return {f.c}
    if isinstance(f, (Not, EG)):
        return constants(f.arg)
    out = constants(f.left) | constants(f.right)
    if isinstance(f, (EU, Until)):
        out.add(f.c)
    return out


def resolve_costs(f, default: Optional[str]):
    """Fill in omitted cost names with ``default``."""
    if isinstance(f, (Const,)):
        return f
    if isinstance(f, Atom):
        return f if f.cost or f.name not in (HAS_PAID, CAN_HAVE_NOT_PAID) else Atom(f.name, default)
    if isinstance(f, Not):
        return Not(resolve_costs(f.arg, default))
    if isinstance(f, EG):
        return EG(resolve_costs(f.arg, default))
    if isinstance(f, EGFalse):
        return EGFalse(f.cost or default, f.op, f.c)
    if isinstance(f, Or):
        return Or(resolve_costs(f.left, default), resolve_costs(f.right, default))
    cls = type(f)
    return cls(resolve_costs(f.left, default), resolve_costs(f.right, default),
               f.cost or default, f.op, f.c)


__all__ = [
    "Const", "Atom", "Not", "Or", "EU", "AU", "EG", "EGFalse", "Until", "TRUE", "FALSE",
    "And", "Implies", "EF", "AF", "EGc", "AG", "neg", "conj", "disj", "parse_formula", "to_text",
    "constrained_height", "FormulaError", "Fraction",
]
