#!/usr/bin/env python3
"""Observed contraction of axis(h) in F2, and of <a> in Z2 for contrast."""

import argparse

from floydtight.contracting import axis_of, contraction_profile, subset
from floydtight.groups import preset


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("-e", "--element", default="ab")
    p.add_argument("--radius", type=int, default=8)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    f2, z2 = preset("f2"), preset("z2")
    X = axis_of(args.element, f2, args.radius).subset
    prof = contraction_profile(X, f2, args.samples, args.seed, radius=args.radius)
    print(f"F2, axis({args.element})")
    print(prof.to_csv())

    R = args.radius
    line = subset(["a" * k for k in range(R + 1)] + ["A" * k for k in range(1, R + 1)], z2, "<a>")
    prof = contraction_profile(line, z2, args.samples, args.seed, radius=R, mu_grid=(0, 1, 2, 3, 5))
    print("Z2, <a>")
    print(prof.to_csv())


if __name__ == "__main__":
    main()
