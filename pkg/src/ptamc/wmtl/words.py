"""Region words encoding joint configurations of the automaton and the ATA.

A word is a tuple of letters.  The first letter holds the elements whose
value has fractional part 0, the last one those above M (written T), and the
letters in between the remaining elements grouped by equal fractional part in
increasing order.  First and last letters are always present, possibly empty;
interior letters never are.  An element is ``("q", location, reg)`` for the
automaton state or ``("l", ata_location, reg)`` for an obligation, with reg
the integer part or None for T.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from ..rational import render

Q, L = "q", "l"


def _key(e):
    return (e[0] != Q, e[1], -1 if e[2] is None else e[2])


@dataclass(frozen=True)
class ConfigWord:
    letters: tuple

    def __post_init__(self):
        if len(self.letters) < 2:
            raise ValueError("a word has at least the anchored first and last letters")
        if any(not a for a in self.letters[1:-1]):
            raise ValueError("interior letters must be nonempty")

    @property
    def first(self) -> frozenset:
        return self.letters[0]

    @property
    def top(self) -> frozenset:
        return self.letters[-1]

    @property
    def interior(self) -> tuple:
        return self.letters[1:-1]

    def pta(self):
        """(letter index, element) of the automaton state."""
        for i, a in enumerate(self.letters):
            for e in a:
                if e[0] == Q:
                    return i, e
        raise ValueError("word without automaton state")

    def obligations(self):
        for i, a in enumerate(self.letters):
            for e in a:
                if e[0] == L:
                    yield i, e

    def accepting(self, ata) -> bool:
        return all(e[1] in ata.accepting for _, e in self.obligations())

    def render(self) -> str:
        parts = []
        for a in self.letters:
            items = ",".join(f"({e[1]},{'T' if e[2] is None else e[2]})" for e in sorted(a, key=_key))
            parts.append("{" + items + "}")
        return " . ".join(parts)

    def __str__(self):
        return self.render()


def make_word(first, interior, top) -> ConfigWord:
    return ConfigWord((frozenset(first),) + tuple(frozenset(a) for a in interior if a) + (frozenset(top),))


@dataclass(frozen=True)
class JointConfig:
    """A concrete joint configuration: automaton state plus ATA obligations (location, value)."""

    location: str
    clock: Fraction
    obligations: frozenset = frozenset()

    def elements(self):
        yield (Q, self.location, Fraction(self.clock))
        for loc, v in self.obligations:
            yield (L, loc, Fraction(v))


def encode(cfg: JointConfig, M: int) -> ConfigWord:
    first, top, by_frac = set(), set(), {}
    for kind, name, v in cfg.elements():
        if v > M:
            top.add((kind, name, None))
            continue
        n = floor(v)
        f = v - n
        if f == 0:
            first.add((kind, name, n))
        else:
            by_frac.setdefault(f, set()).add((kind, name, n))
    return make_word(first, [by_frac[f] for f in sorted(by_frac)], top)


def decode(w: ConfigWord, M: int) -> JointConfig:
    """A representative configuration: interior letter i gets fractional part i/(p+1)."""
    p = len(w.interior)
    loc, clock, obl = None, None, set()
    for i, a in enumerate(w.letters):
        for kind, name, reg in a:
            if reg is None:
                v = Fraction(M + 1)
            else:
                v = Fraction(reg) + (Fraction(i, p + 1) if 0 < i <= p else 0)
            if kind == Q:
                loc, clock = name, v
            else:
                obl.add((name, v))
    return JointConfig(loc, clock, frozenset(obl))


def is_subword(w1: ConfigWord, w2: ConfigWord) -> bool:
    """Anchored subword order: first and last letters compared in place, interior letters
    mapped by an increasing injection into superset letters."""
    if not (w1.first <= w2.first and w1.top <= w2.top):
        return False
    j = 0
    inner2 = w2.interior
    for a in w1.interior:
        while j < len(inner2) and not a <= inner2[j]:
            j += 1
        if j == len(inner2):
            return False
        j += 1
    return True


def value_text(v) -> str:
    return render(v)
