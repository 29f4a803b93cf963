"""Cheapest and dearest repair costs on the repair model.

Prints, for each location, the least B such that EF{c<=B} OK holds at a few
clock values, then the worst-case bound for AF.
"""

import argparse
from fractions import Fraction

from ptamc.rational import render
from ptamc.testkit.generators import gen_repair
from ptamc.wctl.engine import Labeler, holds


def least_bound(pta, q, x, lab, template, hi=100):
    """Smallest integer B in [0, hi] with template(B) true at (q, x), by bisection."""
    lo = 0
    if not holds_at(pta, template.format(hi), q, x, lab):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if holds_at(pta, template.format(mid), q, x, lab):
            hi = mid
        else:
            lo = mid + 1
    return lo


def holds_at(pta, f, q, x, lab):
    from ptamc.wctl.engine import check

    return check(pta, f, (q, x), labeler=lab).holds


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--step", default="5", help="clock step between probes")
    args = ap.parse_args()
    p = gen_repair()
    lab = Labeler(p)
    step = Fraction(args.step)
    for q in p.locations:
        hi = p.invariant[q].interval.hi
        x = Fraction(0)
        row = []
        while x <= hi:
            b = least_bound(p, q, x, lab, "EF{{c<={}}} OK")
            row.append(f"x={render(x)}: {b}")
            x += step
        print(f"{q:10s} min cost  " + ", ".join(row))
    worst = least_bound(p, "Problem", 0, lab, "AF{{c<={}}} OK")
    print(f"worst-case repair cost from (Problem,0): {worst}")
    print("AG(Problem => EF{c<=47} OK):", holds(p, "AG(Problem => EF{c<=47} OK)"))


if __name__ == "__main__":
    main()
