#!/usr/bin/env python3
"""Growth table (b_n, B_n, Fekete bound, ratio) for a few preset groups."""

import argparse

from floydtight.cayley import enumerate_ball
from floydtight.config import resolve_group
from floydtight.growth import critical_bracket, growth_rate_estimate


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("groups", nargs="*", default=["f2", "z2", "z2z3", "z"])
    p.add_argument("--radius", type=int, default=12)
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()

    for name in args.groups:
        t = enumerate_ball(resolve_group(name), args.radius, workers=args.workers, lookahead=True)
        est = growth_rate_estimate(t)
        br = critical_bracket(t)
        print(f"# {name}: hi_certified={br.hi_certified:.5f} ratio={br.lo_heuristic:.5f}")
        print(f"{'n':>3} {'b_n':>10} {'B_n':>10} {'upper':>9} {'ratio':>9}")
        for n in range(1, t.radius + 1):
            print(f"{n:>3} {t.counts[n]:>10} {t.cumulative[n]:>10} {est.upper[n - 1]:>9.5f} {est.ratio[n]:>9.5f}")
        print()


if __name__ == "__main__":
    main()
