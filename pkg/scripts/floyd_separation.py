#!/usr/bin/env python3
"""Compare Floyd separation of ray endpoints in F2 (stays bounded below)
against Z2 (shrinks with depth)."""

from floydtight.floyd import make_floyd_function, separation_probe
from floydtight.groups import preset

RAYS = ["a", "b", "ab"]


def main():
    f = make_floyd_function("polynomial_inverse_square")
    print(f"f(n) = 1/(n^2+1), delay in [{f.delay_inf:.3f}, {f.delay_sup:.3f}]")
    print(f"{'group':<6} {'depth':>5} {'min lower':>10} {'max upper':>10}")
    for name in ("f2", "z2"):
        for depth in (2, 3, 4):
            rep = separation_probe(RAYS, preset(name), f, depth, 2 * depth + 2)
            print(f"{name:<6} {depth:>5} {rep.min_lower:>10.4f} {max(b.upper for row in rep.brackets for b in row if b is not None):>10.4f}")


if __name__ == "__main__":
    main()
