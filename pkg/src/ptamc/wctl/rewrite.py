"""Reduction of WCTL to the core fragment handled by the labeler.

Core fragment: atoms, negation, disjunction, E U (any constraint), unconstrained
A U and E G, and E G{>=c} false / E G{=c} false.  Constrained A U (and through
it every constrained E G) is reduced with the equivalences below, which never
increase the constrained height.

    A f U{>=c} g   ==  A f U g  &  A G{<c} (A f U g)  &  A F{>=c} true
    A f U{>c} g    ==  A f U g  &  A G{<=c} (A f U g) &  A F{>c} true
    E G{>c} false  ==  E G{>=c} false  |  E F{<=c} E G can_have_not_paid
    A f U{<=c} g   ==  A f U g  &  A F{<=c} g
    E G{<=c} g     ==  E G g  |  E g U{>c} true
    A f U{<c} g    ==  A f U g  &  A F{<c} g
    E G{<c} g      ==  E G g  |  E g U{>=c} true
    A f U{=c} g    ==  A f U{>=c} g  &  A F{=c} g
    E G{=c} g      ==  E G{=c} false  |  E F{=c} (has_paid & g & (E G g | E g U has_paid))

A F{op c} g is read as !E G{op c} !g.  E G{=0} g coincides with E G{<=0} g,
which is used instead (a move into cost 0 is never a paying move).
"""

from __future__ import annotations

from ..syntax import (AU, CAN_HAVE_NOT_PAID, EG, EGFalse, EU, FALSE, HAS_PAID, TRUE, Atom, Const, Not,
                      Or, conj, neg)


def _and(*fs):
    return conj(*fs)


def eg_constrained(chi, cost, op, c):
    """E G{op c} chi for op in <=, <, = as a core formula."""
    if op == "=" and c == 0:
        op = "<="
    if op == "<=":
        return Or(EG(chi), EU(chi, TRUE, cost, ">", c))
    if op == "<":
        return Or(EG(chi), EU(chi, TRUE, cost, ">=", c))
    if op == "=":
        paid = Atom(HAS_PAID, cost)
        tail = Or(EG(chi), EU(chi, paid))
        return Or(EGFalse(cost, "=", c), EU(TRUE, And2(paid, _and(chi, tail)), cost, "=", c))
    raise ValueError(op)


def And2(a, b):
    """a & b with a kept as the literal left conjunct (pattern-matched by the labeler)."""
    return Not(Or(Not(a), Not(b)))


def eg_false_gt(cost, c):
    return Or(EGFalse(cost, ">=", c), EU(TRUE, EG(Atom(CAN_HAVE_NOT_PAID, cost)), cost, "<=", c))


def af_constrained(psi, cost, op, c):
    return Not(eg_constrained(neg(psi), cost, op, c))


def au_constrained(phi, psi, cost, op, c):
    base = AU(phi, psi)
    if op == ">=":
        return _and(base, Not(EU(TRUE, neg(base), cost, "<", c)), Not(EGFalse(cost, ">=", c)))
    if op == ">":
        return _and(base, Not(EU(TRUE, neg(base), cost, "<=", c)), Not(eg_false_gt(cost, c)))
    if op in ("<=", "<"):
        return _and(base, af_constrained(psi, cost, op, c))
    if op == "=":
        return _and(au_constrained(phi, psi, cost, ">=", c) if c > 0 else base,
                    af_constrained(psi, cost, "=", c))
    raise ValueError(op)


def rewrite(f):
    """Bottom-up rewrite into the core fragment, followed by constant folding."""
    if isinstance(f, (Const, Atom, EGFalse)):
        if isinstance(f, EGFalse) and f.op == ">":
            return eg_false_gt(f.cost, f.c)
        return f
    if isinstance(f, Not):
        return simplify(Not(rewrite(f.arg)))
    if isinstance(f, Or):
        return simplify(Or(rewrite(f.left), rewrite(f.right)))
    if isinstance(f, EG):
        return simplify(EG(rewrite(f.arg)))
    left, right = rewrite(f.left), rewrite(f.right)
    if type(f) is AU and f.constrained:
        return simplify(au_constrained(left, right, f.cost, f.op, f.c))
    return simplify(type(f)(left, right, f.cost, f.op, f.c))


def simplify(f):
    """Constant folding that keeps every pattern the labeler recognises."""
    if isinstance(f, Not):
        a = simplify(f.arg)
        if isinstance(a, Const):
            return Const(not a.value)
        if isinstance(a, Not):
            return a.arg
        return Not(a)
    if isinstance(f, Or):
        a, b = simplify(f.left), simplify(f.right)
        if a == TRUE or b == TRUE:
            return TRUE
        if a == FALSE:
            return b
        if b == FALSE or a == b:
            return a
        return Or(a, b)
    if isinstance(f, EG):
        a = simplify(f.arg)
        return FALSE if a == FALSE else EG(a)
    if isinstance(f, EU):
        left, right = simplify(f.left), simplify(f.right)
        if right == FALSE:
            return FALSE
        if type(f) is AU and not f.constrained and right == TRUE:
            return TRUE
        return type(f)(left, right, f.cost, f.op, f.c)
    return f


def is_core(f) -> bool:
    if isinstance(f, (Const, Atom)):
        return True
    if isinstance(f, EGFalse):
        return f.op in (">=", "=")
    if isinstance(f, (Not, EG)):
        return is_core(f.arg)
    if isinstance(f, Or):
        return is_core(f.left) and is_core(f.right)
    if type(f) is AU and f.constrained:
        return False
    return is_core(f.left) and is_core(f.right)
