#!/usr/bin/env python3
"""Run a bundled (or user) tightness experiment and print a summary."""

import argparse
import json
from pathlib import Path

from floydtight.config import bundled_configs, load_config
from floydtight.tightness import tightness_experiment


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("config", nargs="?", default="exp_f2_z2",
                   help=f"bundled name ({', '.join(bundled_configs())}) or JSON path")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, help="write the full report as JSON here")
    args = p.parse_args()

    cfg = load_config(args.config)
    rep = tightness_experiment(cfg.tightness(workers=args.workers))
    d = rep.to_dict()
    print(f"{cfg.name}: h={d['h']} L={d['L']} net={d['net_size']} n={d['n']} tau_max={d['tau_max']}")
    for c in d["certificates"]:
        mark = "certified" if c["certified"] else "-"
        print(f"  s={c['s']:<5} value={c['value']:.4f}  {mark}")
    print(f"  delta_G hi = {d['delta_G']['hi_certified']:.4f}")
    print(f"  delta_Gbar lo = {d['delta_Gbar']['lo_heuristic']:.4f}")
    print(f"  gap ratio = {d['delta_G_hi_minus_delta_Gbar_ratio']:.4f}")
    if args.out:
        args.out.write_text(json.dumps(d, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
