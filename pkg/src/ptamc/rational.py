"""Exact rational parsing and rendering."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Q = Fraction


def parse_rational(text) -> Fraction:
    """Parse "p/q", an integer, or a decimal with a finite expansion."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise ValueError(f"refusing inexact float {text!r}; write it as p/q")
    s = str(text).strip()
    if not s:
        raise ValueError("empty rational")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {s!r}") from exc


def render(v) -> str:
    if v is None:
        return "inf"
    v = Fraction(v)
    if v.denominator == 1:
        return str(v.numerator)
    return f"{v.numerator}/{v.denominator}"


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        if v:
            out = out * v // gcd(out, v)
    return out
