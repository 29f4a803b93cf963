"""Linear-time engine against the bounded run oracle and the unpruned search.

Counts (pruned verdict, oracle, unpruned verdict) triples over random
stopwatch models; any oracle positive the engine misses, or any pruned/unpruned
split, is printed.
"""

import argparse
import time
from collections import Counter

from ptamc.testkit.generators import RandomParams, gen_random
from ptamc.testkit.oracle import OracleBudget
from ptamc.testkit.oracle_wmtl import oracle_wmtl
from ptamc.wmtl import decide_exists

FORMULAS = ["F{c<=2} b", "F{c>=3} b", "G{c<=2} a", "a U{c=2} b", "G(a => F{c<=1} b)",
            "!(a U{c>1} !b)", "F(a & F{c=1} b)", "(F{c<=1} a) & (F{c>=2} b)"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--models", type=int, default=30)
    ap.add_argument("--depth", type=int, default=4)
    ap.add_argument("--max-constant", type=int, default=2)
    ap.add_argument("--max-nodes", type=int, default=3000)
    args = ap.parse_args()
    counts, bad = Counter(), 0
    t = time.time()
    for seed in range(args.models):
        pta = gen_random(RandomParams(rates=(0, 1), max_discrete=2, max_constant=args.max_constant), seed)
        for f in FORMULAS:
            r = decide_exists(pta, f)
            u = decide_exists(pta, f, prune=False, max_nodes=args.max_nodes)
            o = oracle_wmtl(pta, f, budget=OracleBudget(depth=args.depth, den=2))
            counts[(r.verdict, o, u.verdict)] += 1
            if (o is True and r.verdict is not True) or (u.verdict is not None and u.verdict != r.verdict):
                bad += 1
                print("MISMATCH", seed, f, r.verdict, o, u.verdict)
    for k, v in sorted(counts.items(), key=str):
        print(f"pruned={k[0]} oracle={k[1]} unpruned={k[2]}: {v}")
    print(f"mismatches: {bad}  ({time.time() - t:.1f}s)")


if __name__ == "__main__":
    main()
