"""Satisfaction sets of the nested halving formula for n = 1..N, with timings."""

import argparse
import time

from ptamc.testkit.generators import gen_binary
from ptamc.wctl.engine import check
from ptamc.wctl.granularity import granularity


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=4)
    args = ap.parse_args()
    for n in range(1, args.max_n + 1):
        pta, f = gen_binary(n)
        t = time.time()
        r = check(pta, f)
        g = granularity(pta, f)
        print(f"n={n} g={g.g} points={len(r.sat['a'])} time={time.time() - t:.2f}s  a: {r.sat['a']}")


if __name__ == "__main__":
    main()
