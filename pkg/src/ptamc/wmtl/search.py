"""Symbolic successors of region words and the pruned tree search.

Time passes in the current location of the automaton.  With rate 1 every
value grows, which rotates the word: the fractional-0 letter lifts off, then
the letter with the largest fractional part wraps to the next integer.  With
rate 0 only the automaton clock moves; it passes through and between the
letters of the frozen obligations.  A discrete step moves the automaton,
adds the edge's discrete cost to every obligation and lets each obligation
read the new letter, choosing a minimal model of its transition formula.

The search unfolds mixed moves (delay, then edge) breadth first and cuts a
branch whose word is above, in the anchored subword order, a word already
in the tree.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Optional

from ..model import CostFunction, OneClockPTA
from ..syntax import FormulaError, cost_names, parse_formula, resolve_costs, Until
from .ata import ATA, models, to_ata
from .words import L, Q, ConfigWord, JointConfig, encode, is_subword, make_word

log = logging.getLogger("ptamc.wmtl")


class UndecidableInput(FormulaError):
    """The model/formula pair is outside the decidable fragment."""


def pta_value(w: ConfigWord, M: int) -> Fraction:
    """A clock value in the region of the automaton element of w."""
    i, (_, _, reg) = w.pta()
    if reg is None:
        return Fraction(M + 1)
    return Fraction(reg) if i == 0 else Fraction(reg) + Fraction(1, 2)


# ------------------------------------------------------------------ time


def _rate1_step(w: ConfigWord, M: int) -> Optional[ConfigWord]:
    if w.first:
        stay = {e for e in w.first if e[2] < M}
        over = {(k, n, None) for k, n, r in w.first if r >= M}
        return make_word((), (stay,) + w.interior, w.top | over)
    if not w.interior:
        return None
    last = w.interior[-1]
    wrapped = {(k, n, r + 1) for k, n, r in last}
    return make_word(wrapped, w.interior[:-1], w.top)


def _rate0_step(w: ConfigWord, M: int) -> Optional[ConfigWord]:
    i, p_el = w.pta()
    kind, q, n = p_el
    if n is None:
        return None
    letters = [set(a) for a in w.letters]
    letters[i].discard(p_el)
    last_inner = len(letters) - 2
    if i == 0:
        if n >= M:
            letters[-1].add((Q, q, None))
        else:
            letters.insert(1, {p_el})
    elif letters[i]:
        letters.insert(i + 1, {p_el})
    elif i < last_inner:
        letters[i + 1].add(p_el)
    else:
        letters[0].add((Q, q, n + 1))
    return make_word(letters[0], letters[1:-1], letters[-1])


def time_successors(w: ConfigWord, pta: OneClockPTA, cost: CostFunction, M: int) -> list:
    """Distinct words reachable by a positive delay, in the order they are met."""
    _, (_, q, _) = w.pta()
    step = _rate1_step if cost.rate[q] == 1 else _rate0_step
    inv = pta.invariant[q]
    out, cur = [], w
    while True:
        cur = step(cur, M)
        if cur is None or pta_value(cur, M) not in inv:
            return out
        out.append(cur)


# ------------------------------------------------------------------ discrete


def _shift(i, e, k, last, M):
    """Letter index and element after adding the discrete cost k to an obligation."""
    kind, name, r = e
    if k == 0 or r is None:
        return i, e
    r2 = r + k
    if (i == 0 and r2 <= M) or (0 < i < last and r2 <= M - 1):
        return i, (kind, name, r2)
    return last, (kind, name, None)


def discrete_successors(w: ConfigWord, pta: OneClockPTA, ata: ATA, cost: CostFunction, M: int) -> set:
    i, p_el = w.pta()
    q = p_el[1]
    x = pta_value(w, M)
    last = len(w.letters) - 1
    out = set()
    for e in pta.out_edges[q]:
        edge = pta.edges[e]
        if x not in edge.guard:
            continue
        x2 = Fraction(0) if edge.reset else x
        if x2 not in pta.invariant[edge.target]:
            continue
        k = cost.discrete[e]
        base = [set() for _ in w.letters]
        if edge.reset:
            base[0].add((Q, edge.target, 0))
        else:
            base[i].add((Q, edge.target, p_el[2]))
        sigma = pta.labels[edge.target]
        choices = []
        for j, ob in w.obligations():
            j2, ob2 = _shift(j, ob, k, last, M)
            ms = models(ata.delta[ob2[1]], sigma, ob2[2], j2 == 0)
            if not ms:
                choices = None
                break
            choices.append([(j2, ob2, m) for m in ms])
        if choices is None:
            continue
        for combo in product(*choices):
            letters = [set(a) for a in base]
            for j2, ob2, m in combo:
                for loc, reset in m:
                    if reset:
                        letters[0].add((L, loc, 0))
                    else:
                        letters[j2].add((L, loc, ob2[2]))
            out.add(make_word(letters[0], letters[1:-1], letters[-1]))
    return out


def mixed_successors(w: ConfigWord, pta, ata, cost, M) -> list:
    """(time word, next word) for every delay (possibly zero) followed by an edge."""
    out = []
    seen = set()
    for wt in [w] + time_successors(w, pta, cost, M):
        for w2 in sorted(discrete_successors(wt, pta, ata, cost, M), key=str):
            if w2 not in seen:
                seen.add(w2)
                out.append((wt, w2))
    return out


# ------------------------------------------------------------------ search


@dataclass
class Node:
    word: ConfigWord
    parent: Optional[int]
    via: Optional[ConfigWord]  # word after the delay, before the edge
    pruned: bool = False
    accepting: bool = False


@dataclass
class SearchTree:
    nodes: list = field(default_factory=list)

    def path(self, k: int) -> list:
        out = []
        while k is not None:
            out.append(k)
            k = self.nodes[k].parent
        return out[::-1]

    def to_dot(self) -> str:
        lines = ["digraph search {", "  node [shape=box, fontname=monospace];"]
        for k, n in enumerate(self.nodes):
            style = ', style=dashed, color=gray' if n.pruned else (', peripheries=2' if n.accepting else '')
            lines.append(f'  w{k} [label="{n.word.render()}"{style}];')
            if n.parent is not None:
                lines.append(f"  w{n.parent} -> w{k};")
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass
class WmtlResult:
    verdict: Optional[bool]  # None when the node budget ran out
    witness: list  # words from the root to an accepting word
    tree: SearchTree
    stats: dict

    def witness_text(self) -> list:
        return [w.render() for w in self.witness]


def wmtl_setup(pta: OneClockPTA, formula):
    """(parsed formula, automaton, cost used for the variable, M)."""
    f = parse_formula(formula, "wmtl") if isinstance(formula, str) else formula
    default = pta.costs[0].name if len(pta.costs) == 1 else None
    f = resolve_costs(f, default)
    names = {n for n in cost_names(f)}
    if None in names:
        raise FormulaError("the model has several costs; name one in every constraint")
    for n in names:
        if not pta.has_cost(n):
            raise FormulaError(f"unknown cost {n!r}")
    if len(names) > 1:
        raise UndecidableInput("constraints over two cost functions are outside the decidable fragment "
                               "(one stopwatch cost only)")
    if names:
        cost = pta.cost(next(iter(names)))
        if not cost.is_stopwatch():
            raise UndecidableInput(f"cost {cost.name!r} has rates outside {{0,1}}; linear-time checking is "
                                   "only decidable for one stopwatch cost")
    else:
        # no constrained modality: the variable is never read, freeze it
        cost = CostFunction("_none", {q: 0 for q in pta.locations}, tuple(0 for _ in pta.edges))
    ata = to_ata(f)
    M = max([pta.max_constant] + [int(c) for c in ata.constants])
    return f, ata, cost, M


def initial_words(pta, ata, M, state=None) -> list:
    q, x = state if state is not None else (pta.initial, 0)
    x = Fraction(x)
    if x not in pta.invariant[q]:
        return []
    out = []
    for m in models(ata.initial, pta.labels[q]):
        cfg = JointConfig(q, x, frozenset((loc, Fraction(0)) for loc, _ in m))
        w = encode(cfg, M)
        if w not in out:
            out.append(w)
    return out


def decide_exists(pta: OneClockPTA, formula, state=None, *, prune: bool = True,
                  max_nodes: Optional[int] = None) -> WmtlResult:
    """Is there a finite run from ``state`` (default: initial, 0) satisfying the formula?"""
    f, ata, cost, M = wmtl_setup(pta, formula)
    tree = SearchTree()
    kept = []  # words of expanded (non-pruned) nodes
    seen = set()
    queue = deque()
    stats = {"M": M, "ata_locations": len(ata.locations), "nodes": 0, "pruned": 0, "expanded": 0}

    def add(word, parent, via):
        if not prune and word in seen:
            return None
        k = len(tree.nodes)
        node = Node(word, parent, via, accepting=word.accepting(ata))
        tree.nodes.append(node)
        stats["nodes"] += 1
        if node.accepting:
            return k
        if prune and any(is_subword(v, word) for v in kept):
            node.pruned = True
            stats["pruned"] += 1
            return None
        seen.add(word)
        kept.append(word)
        queue.append(k)
        return None

    def result(k, verdict):
        words = [tree.nodes[i].word for i in tree.path(k)] if k is not None else []
        return WmtlResult(verdict, words, tree, stats)

    for w in initial_words(pta, ata, M, state):
        hit = add(w, None, None)
        if hit is not None:
            return result(hit, True)
    while queue:
        if max_nodes is not None and stats["nodes"] >= max_nodes:
            return result(None, None)
        k = queue.popleft()
        stats["expanded"] += 1
        for wt, w2 in mixed_successors(tree.nodes[k].word, pta, ata, cost, M):
            hit = add(w2, k, wt)
            if hit is not None:
                return result(hit, True)
    log.debug("search exhausted: %s", stats)
    return result(None, False)
