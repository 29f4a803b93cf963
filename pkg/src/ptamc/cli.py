"""Command-line front end: check, dump, oracle, generate.

Exit codes: 0 the property holds (or no disagreement), 1 it fails, 2 usage,
model or formula error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from .model import ModelError, load_model, serialize
from .rational import parse_rational, render
from .syntax import FormulaError

log = logging.getLogger("ptamc")

EXIT_HOLDS, EXIT_FAILS, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


# ------------------------------------------------------------------ inputs


def load(spec: str):
    """A model file (YAML or JSON), or a built-in: ``repair``, ``binary:N``."""
    from .testkit.generators import gen_binary, gen_repair

    if spec == "repair":
        return gen_repair()
    if spec.startswith("binary:"):
        return gen_binary(int(spec.split(":", 1)[1]))[0]
    path = Path(spec)
    if not path.exists():
        raise UsageError(f"no such model file: {spec}")
    return load_model(path.read_text())


def parse_state(text, pta):
    if text is None:
        return None
    loc, _, val = text.partition(",")
    loc = loc.strip()
    if loc not in pta.invariant:
        raise UsageError(f"unknown location {loc!r}")
    try:
        x = parse_rational(val or "0")
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if x < 0:
        raise UsageError("clock values are nonnegative")
    return loc, x


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n} is required here")


def _emit(obj, fmt):
    if fmt == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(obj)


# ------------------------------------------------------------------ check


def _wctl_stats(pta, formula, result):
    from .wctl.granularity import granularity

    gran = granularity(pta, formula)
    st = result.stats
    return {"C": gran.C, "h": gran.h, "g": render(gran.g), "M": gran.M, "cost_graphs": st.graphs,
            "nodes": st.nodes, "edges": st.edges, "unfoldings": st.unfoldings,
            "subformulas": st.subformulas}


def cmd_check(args) -> int:
    _need(args, "model", "formula")
    pta = load(args.model)
    state = parse_state(args.state, pta)
    q, x = state or (pta.initial, Fraction(0))
    if args.logic == "wmtl":
        from .wmtl.search import decide_exists

        res = decide_exists(pta, args.formula, state)
        if args.format == "dot":
            print(res.tree.to_dot(), end="")
        elif args.format == "json":
            _emit({"logic": "wmtl", "formula": args.formula, "state": [q, render(x)],
                   "verdict": res.verdict, "witness": res.witness_text(), "stats": res.stats}, "json")
        else:
            print(f"{'holds' if res.verdict else 'fails'} at ({q},{render(x)})")
            for w in res.witness_text():
                print(f"  {w}")
            print("stats: " + ", ".join(f"{k}={v}" for k, v in res.stats.items()))
        return EXIT_HOLDS if res.verdict else EXIT_FAILS

    from .wctl.engine import check

    res = check(pta, args.formula, (q, x))
    stats = _wctl_stats(pta, args.formula, res)
    if args.format == "dot":
        print(sat_dot(pta, res.sat), end="")
    elif args.format == "json":
        _emit({"logic": "wctl", "formula": args.formula, "state": [q, render(x)], "verdict": res.holds,
               "sat": res.sat.render(), "stats": stats}, "json")
    else:
        print(f"{'holds' if res.holds else 'fails'} at ({q},{render(x)})")
        for loc in pta.locations:
            print(f"  {loc}: {res.sat[loc]}")
        print("stats: " + ", ".join(f"{k}={v}" for k, v in stats.items()))
    return EXIT_HOLDS if res.holds else EXIT_FAILS


def sat_dot(pta, sat) -> str:
    lines = ["digraph sat {", "  node [shape=box, fontname=monospace];"]
    for q in pta.locations:
        lines.append(f'  "{q}" [label="{q}\\n{sat[q]}"];')
    for e in pta.edges:
        lines.append(f'  "{e.source}" -> "{e.target}" [label="{e.guard}{" x:=0" if e.reset else ""}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------ dump


def model_dot(pta) -> str:
    lines = ["digraph model {", "  node [shape=box, fontname=monospace];"]
    for q in pta.locations:
        rates = " ".join(f"{c.name}'={c.rate[q]}" for c in pta.costs)
        peri = ", peripheries=2" if q == pta.initial else ""
        lines.append(f'  "{q}" [label="{q}\\n{pta.invariant[q]}\\n{rates}"{peri}];')
    for i, e in enumerate(pta.edges):
        lab = [str(e.guard)] + (["x:=0"] if e.reset else [])
        lab += [f"{c.name}+={c.discrete[i]}" for c in pta.costs if c.discrete[i]]
        lines.append(f'  "{e.source}" -> "{e.target}" [label="{" ".join(lab)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def region_dot(rg) -> str:
    part = rg.part
    lines = ["digraph regions {", "  rankdir=LR;", "  node [shape=box, fontname=monospace];"]
    ids = {}
    for n in rg.nodes():
        ids[n] = f"r{len(ids)}"
        lines.append(f'  {ids[n]} [label="({n[0]},{part.label(n[1])})"];')
    for n in rg.nodes():
        seen = set()
        for _, e, q2, r2 in rg.mixed_successors(*n):
            m = (q2, r2)
            if m in ids and m not in seen:
                seen.add(m)
                lines.append(f"  {ids[n]} -> {ids[m]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_dump(args) -> int:
    _need(args, "model")
    pta = load(args.model)
    what = args.what
    if what == "model":
        if args.format == "dot":
            print(model_dot(pta), end="")
            return EXIT_HOLDS
        print(serialize(pta, "json" if args.format == "json" else "yaml"), end="")
        return EXIT_HOLDS
    if what in ("regions", "cost-graph"):
        from .regions import Partition, RegionGraph
        from .wctl.granularity import granularity

        if args.formula:
            gran = granularity(pta, args.formula)
            part = gran.partition()
        else:
            gran, part = None, Partition.classical(pta.max_constant)
        if what == "regions":
            rg = RegionGraph(pta, part)
            if args.format == "dot":
                print(region_dot(rg), end="")
            else:
                info = {"regions": part.count, "nodes": len(rg.nodes())}
                if gran is not None:
                    info.update(C=gran.C, h=gran.h, g=render(gran.g), M=gran.M, samples=gran.sample_count)
                _emit(info if args.format == "json" else
                      "\n".join(f"{k}: {v}" for k, v in info.items()), args.format)
            return EXIT_HOLDS
        from .wctl.costgraph import build_cost_graph, describe_edge

        g = build_cost_graph(pta, part)
        if args.format == "dot":
            print(g.to_dot(), end="")
        else:
            lines = [describe_edge(g, s, d, lab) for s, d, lab, _ in g.edge_list()]
            _emit(lines if args.format == "json" else "\n".join(lines), args.format)
        return EXIT_HOLDS
    if what in ("ata", "search-tree"):
        _need(args, "formula")
        from .wmtl.ata import to_ata
        from .wmtl.search import decide_exists

        if what == "ata":
            ata = to_ata(args.formula)
            if args.format == "dot":
                print(ata.to_dot(), end="")
            else:
                _emit(ata.describe() if args.format == "json" else "\n".join(ata.describe()), args.format)
            return EXIT_HOLDS
        res = decide_exists(pta, args.formula, parse_state(args.state, pta))
        print(res.tree.to_dot(), end="")
        return EXIT_HOLDS
    raise UsageError(f"nothing to dump for {what!r}")


# ------------------------------------------------------------------ oracle


def _grid(text) -> int:
    v = parse_rational(text)
    if v <= 0:
        raise UsageError("grid must be positive")
    # accept both "24" and "1/24"
    return int(1 / v) if v.numerator == 1 and v < 1 else int(v)


def cmd_oracle(args) -> int:
    _need(args, "model", "formula")
    from .testkit.oracle import OracleBudget

    pta = load(args.model)
    q, x = parse_state(args.state, pta) or (pta.initial, Fraction(0))
    budget = OracleBudget(depth=args.depth, den=_grid(args.grid))
    if args.logic == "wmtl":
        from .testkit.oracle_wmtl import oracle_wmtl
        from .wmtl.search import decide_exists

        engine = decide_exists(pta, args.formula, (q, x)).verdict
        oracle = oracle_wmtl(pta, args.formula, (q, x), budget)
    else:
        from .testkit.oracle import oracle_wctl
        from .wctl.engine import check

        engine = check(pta, args.formula, (q, x)).holds
        oracle = oracle_wctl(pta, args.formula, (q, x), budget)
    if oracle is None:
        status = "ORACLE-INCONCLUSIVE"
    else:
        status = "AGREE" if oracle == engine else "DISAGREE"
    print(f"({q},{render(x)}) engine={str(engine).lower()} "
          f"oracle={'unknown' if oracle is None else str(oracle).lower()} {status}")
    return EXIT_FAILS if status == "DISAGREE" else EXIT_HOLDS


# ------------------------------------------------------------------ generate


def parse_program(text: str):
    """``inc 1 1; dec 1 2 3; halt``: one instruction per ';', jumps by index."""
    from .testkit.gadgets import Dec, Halt, Inc, TwoCounterMachine

    out = []
    for part in filter(None, (p.strip() for p in text.split(";"))):
        words = part.split()
        try:
            if words[0] == "inc" and len(words) == 3:
                out.append(Inc(int(words[1]), int(words[2])))
            elif words[0] == "dec" and len(words) == 4:
                out.append(Dec(int(words[1]), int(words[2]), int(words[3])))
            elif words == ["halt"]:
                out.append(Halt())
            else:
                raise ValueError
        except ValueError:
            raise UsageError(f"bad instruction {part!r}") from None
    try:
        return TwoCounterMachine(tuple(out))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_generate(args) -> int:
    from .testkit import generators as gen

    formula = None
    if args.what == "repair":
        pta = gen.gen_repair()
    elif args.what == "binary":
        pta, f = gen.gen_binary(args.n)
        from .syntax import to_text

        formula = to_text(f)
    elif args.what == "random":
        pta = gen.gen_random(gen.RandomParams(rates=(0, 1) if args.stopwatch else (0, 1, 2)), args.seed)
    else:
        from .testkit.gadgets import gen_2cm_gadgets

        _need(args, "program")
        m = parse_program(args.program)
        pta, formula = gen_2cm_gadgets(m)
        if args.force:
            print("WARNING: this input is outside the decidable fragment; exploring bounded runs only, "
                  "an answer of 'unknown' proves nothing", file=sys.stderr)
            from .testkit.oracle import OracleBudget
            from .testkit.oracle_wmtl import oracle_wmtl

            v = oracle_wmtl(pta, formula, budget=OracleBudget(depth=args.depth, den=_grid(args.grid)),
                            require_stopwatch=False)
            print(f"# bounded exploration: {'witness found' if v else 'unknown'}", file=sys.stderr)
    text = serialize(pta, "json" if args.format == "json" else "yaml")
    if formula is not None and args.format != "json":
        text = f"# formula: {formula}\n" + text
    print(text, end="")
    return EXIT_HOLDS


# ------------------------------------------------------------------ main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ptamc", description="Model checking of one-clock priced timed automata.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def common(sp, formats=("text", "json", "dot")):
        sp.add_argument("--model", help="model file, 'repair' or 'binary:N'")
        sp.add_argument("--formula")
        sp.add_argument("--logic", choices=("wctl", "wmtl"), default="wctl")
        sp.add_argument("--state", help="query state 'Location,x' (x exact, e.g. 5/2)")
        sp.add_argument("--format", choices=formats, default="text")

    common(sub.add_parser("check", help="decide a formula"))
    d = sub.add_parser("dump", help="export regions, cost graph, automaton or search tree")
    common(d)
    d.add_argument("--what", choices=("model", "regions", "cost-graph", "ata", "search-tree"), default="regions")
    o = sub.add_parser("oracle", help="compare the engine with the bounded oracle")
    common(o, ("text",))
    for sp in (o,):
        sp.add_argument("--depth", type=int, default=6)
        sp.add_argument("--grid", default="1/2", help="delay grid, e.g. 1/24")
    g = sub.add_parser("generate", help="emit a model document")
    g.add_argument("what", choices=("repair", "binary", "random", "2cm"))
    g.add_argument("--n", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--stopwatch", action="store_true", help="random model with rates in {0,1}")
    g.add_argument("--program", help="2cm program, e.g. 'inc 1 1; halt'")
    g.add_argument("--force", action="store_true", help="bounded exploration of a 2cm instance")
    g.add_argument("--depth", type=int, default=4)
    g.add_argument("--grid", default="1/2")
    g.add_argument("--format", choices=("yaml", "json"), default="yaml")
    return p


def main(argv=None) -> int:
    if os.environ.get("PTAMC_TRACE"):
        logging.basicConfig(level=logging.DEBUG, format="%(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    handler = {"check": cmd_check, "dump": cmd_dump, "oracle": cmd_oracle, "generate": cmd_generate}[args.cmd]
    try:
        return handler(args)
    except (UsageError, ModelError, FormulaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
