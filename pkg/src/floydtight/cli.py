"""Command-line entry point: ``floydtight <command> [flags]``.

Exit status 0 on success, 1 when a computed verdict fails, 2 on a
configuration error.  JSON reports are canonical (sorted keys); the only
run-dependent field is ``metadata``.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import sys
from importlib import metadata as _metadata
from pathlib import Path
from typing import Callable, Sequence

from .cayley import BudgetExceeded, DEFAULT_MAX_ELEMENTS, enumerate_ball
from .config import ConfigError, load_config, resolve_group
from .contracting import axis_of, bounded_projection_check, contraction_profile
from .floyd import FloydDelayError, make_floyd_function, separation_probe
from .groups import AlphabetError, GroupBackend
from .growth import critical_bracket, growth_csv, growth_rate_estimate, poincare_truncated
from .quotient import wordmetric_sweep
from .tightness import ExperimentRefused, tightness_experiment

EXIT_OK, EXIT_VERDICT, EXIT_CONFIG = 0, 1, 2
COMMANDS = ("ball", "growth", "floyd", "axis", "contract", "quotient-check", "tightness")


def _version() -> str:
    try:
        return _metadata.version("artifact")
    except _metadata.PackageNotFoundError:
        return "unknown"


def canonical_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def strip_metadata(text: str) -> dict:
    data = json.loads(text)
    data.pop("metadata", None)
    return data


class _Emitter:
    """Writes artifacts under --out, or the primary one to stdout."""

    def __init__(self, args: argparse.Namespace):
        self.out = Path(args.out) if args.out else None
        self.args = args
        if self.out is not None:
            self.out.mkdir(parents=True, exist_ok=True)
        self.primary_done = False

    def write(self, filename: str, text: str, primary: bool = False) -> None:
        if self.out is not None:
            (self.out / filename).write_text(text)
        elif primary and not self.primary_done:
            sys.stdout.write(text)
            self.primary_done = True

    def report(self, filename: str, body: dict, primary: bool = False) -> None:
        body = dict(body)
        body["metadata"] = {
            "command": self.args.command,
            "argv": list(self.args.argv),
            "version": _version(),
            "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        }
        self.write(filename, canonical_json(body), primary)


def _group(args) -> GroupBackend:
    if not args.group:
        raise ConfigError("--group is required")
    return resolve_group(args.group)


def _radius(args, default: int | None = None) -> int:
    r = args.radius if args.radius is not None else default
    if r is None:
        raise ConfigError("--radius is required")
    if r < 0:
        raise ConfigError("--radius must be >= 0")
    return r


def cmd_ball(args, emit: _Emitter) -> int:
    backend = _group(args)
    table = enumerate_ball(backend, _radius(args), workers=args.workers, max_elements=args.max_elements)
    emit.write("ball.csv", table.to_csv(), primary=True)
    if args.dump_elements:
        emit.write("elements.txt", table.dump_elements())
    return EXIT_OK


def cmd_growth(args, emit: _Emitter) -> int:
    backend = _group(args)
    R = _radius(args)
    if R < 2:
        raise ConfigError("growth needs --radius >= 2")
    table = enumerate_ball(backend, R, workers=args.workers, max_elements=args.max_elements, lookahead=True)
    est = growth_rate_estimate(table)
    emit.write("growth.csv", growth_csv(table), primary=True)
    body = {
        "group": backend.name,
        "radius": R,
        "counts": table.counts,
        "cumulative": table.cumulative,
        "next_count": table.next_count,
        "upper": list(est.upper),
        "ratio": list(est.ratio),
    }
    if R >= 4:
        body["critical_bracket"] = critical_bracket(table).to_dict()
    body["poincare"] = [
        {"s": s, "P": p, "P_cumulative": pc} for s in args.s for p, pc in [poincare_truncated(table, s)]
    ]
    emit.report("growth.json", body)
    return EXIT_OK


def _floyd_function(args, cfg=None):
    if cfg is not None and cfg.floyd is not None and args.kind is None:
        return cfg.floyd
    kind = args.kind or "polynomial_inverse_square"
    params = list(args.params or [])
    if args.lam is not None:
        params = [args.lam]
    return make_floyd_function(kind, params, args.probe_n)


def _default_rays(backend: GroupBackend) -> list[str]:
    gens = []
    for x in backend.letters:
        if backend.alphabet.inv(x) not in gens:
            gens.append(x)
    rays = gens[:3]
    if len(rays) < 3 and len(gens) >= 2:
        rays.append(backend.multiply(gens[0], gens[1]))
    return rays


def cmd_floyd(args, emit: _Emitter) -> int:
    cfg = load_config(args.config) if args.config else None
    backend = _group(args) if args.group or cfg is None else cfg.pi.source
    f = _floyd_function(args, cfg)
    rays = args.rays.split(",") if args.rays else _default_rays(backend)
    depth = args.depth
    R = _radius(args, 2 * depth + 2)
    rep = separation_probe(rays, backend, f, depth, R, threshold=args.threshold)
    emit.write("floyd.csv", rep.to_csv(), primary=True)
    body = {"group": backend.name, "floyd": f.to_dict(), **rep.to_dict()}
    emit.report("floyd.json", body)
    ok = all(b.lower <= b.upper for row in rep.brackets for b in row)
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_axis(args, emit: _Emitter) -> int:
    backend = _group(args)
    if not args.element:
        raise ConfigError("--element is required")
    ax = axis_of(args.element, backend, _radius(args, 8))
    body = {
        "group": backend.name,
        "h": ax.h,
        "root": ax.root,
        "conjugator": ax.conjugator,
        "radius": ax.radius,
        "rule": ax.subset.generator_rule,
        "elements": [g or "." for g in ax.sorted_elements(backend)],
    }
    emit.report("axis.json", body, primary=True)
    return EXIT_OK


def cmd_contract(args, emit: _Emitter) -> int:
    backend = _group(args)
    if not args.element:
        raise ConfigError("--element is required")
    R = _radius(args, 8)
    table = enumerate_ball(backend, R, workers=args.workers)
    X = axis_of(args.element, backend, R).subset
    prof = contraction_profile(X, backend, args.samples, args.seed, radius=R, mu_grid=args.mu,
                               table=table, workers=args.workers)
    emit.write("profile.csv", prof.to_csv(), primary=True)
    body = {"group": backend.name, "element": backend.reduce(args.element), "radius": R, **prof.to_dict()}
    if args.other:
        X2 = axis_of(args.other, backend, R).subset
        body["other"] = backend.reduce(args.other)
        body["bounded_projection"] = bounded_projection_check(X, X2, backend)
    emit.report("contract.json", body)
    seen = [e for e in prof.eps_observed if e is not None]
    # larger mu filters a subset of samples, so eps cannot increase
    ok = all(a >= b for a, b in zip(seen, seen[1:]))
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_quotient_check(args, emit: _Emitter) -> int:
    if not args.config:
        raise ConfigError("quotient-check needs --config")
    cfg = load_config(args.config)
    r = _radius(args, cfg.rep_radius)
    checks = wordmetric_sweep(cfg.pi, args.max_dbar, r)
    body = {
        "name": cfg.name,
        "source_radius": r,
        "max_dbar": args.max_dbar,
        "checked": len(checks),
        "mismatches": sum(c.status == "mismatch" for c in checks),
        "inconclusive": sum(c.status == "inconclusive" for c in checks),
        "checks": [
            {"gbar": c.gbar or ".", "d_bar": c.d_bar, "d_min": c.d_min, "witness": c.witness, "status": c.status}
            for c in checks
        ],
    }
    emit.report("quotient.json", body, primary=True)
    return EXIT_VERDICT if body["mismatches"] else EXIT_OK


def cmd_tightness(args, emit: _Emitter) -> int:
    if not args.config:
        raise ConfigError("tightness needs --config")
    cfg = load_config(args.config)
    tc = cfg.tightness(workers=args.workers, seed=args.seed)
    if args.radius is not None:
        tc.rep_radius = args.radius
    report = tightness_experiment(tc)
    emit.report("tightness.json", report.to_dict(), primary=True)
    emit.write("certificates.csv", report.certificates_csv())
    ok = report.injectivity is not None and report.injectivity.verdict and report.gap_lower_bound is not None
    return EXIT_OK if ok else EXIT_VERDICT


HANDLERS: dict[str, Callable[[argparse.Namespace, _Emitter], int]] = {
    "ball": cmd_ball,
    "growth": cmd_growth,
    "floyd": cmd_floyd,
    "axis": cmd_axis,
    "contract": cmd_contract,
    "quotient-check": cmd_quotient_check,
    "tightness": cmd_tightness,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", help="preset (f2, f3, z, z2, z2z3) or presentation JSON path")
    common.add_argument("--config", help="bundled config name or JSON path")
    common.add_argument("--radius", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--out", help="output directory; stdout gets the primary artifact otherwise")

    parser = argparse.ArgumentParser(prog="floydtight", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ball", parents=[common], help="sphere/ball counts")
    p.add_argument("--dump-elements", action="store_true")
    p.add_argument("--max-elements", type=int, default=DEFAULT_MAX_ELEMENTS)

    p = sub.add_parser("growth", parents=[common], help="growth bounds and Poincare sums")
    p.add_argument("--max-elements", type=int, default=DEFAULT_MAX_ELEMENTS)
    p.add_argument("--s", type=float, nargs="*", default=[0.5, 1.2, 3.0])

    p = sub.add_parser("floyd", parents=[common], help="Floyd distance brackets between ray points")
    p.add_argument("--kind", help="polynomial_inverse_square, exponential or table")
    p.add_argument("--params", type=float, nargs="*")
    p.add_argument("--lam", type=float, help="shorthand for the exponential parameter")
    p.add_argument("--probe-n", type=int, default=100)
    p.add_argument("--rays", help="comma-separated ray words, at least three")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--threshold", type=float, default=1.0)

    p = sub.add_parser("axis", parents=[common], help="truncated axis of an element")
    p.add_argument("--element", "-e")

    p = sub.add_parser("contract", parents=[common], help="sampled contraction profile of an axis")
    p.add_argument("--element", "-e")
    p.add_argument("--other", help="second axis for the bounded projection check")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--mu", type=int, nargs="*", default=[0, 1, 2, 3])

    p = sub.add_parser("quotient-check", parents=[common], help="quotient metric sweep")
    p.add_argument("--max-dbar", type=int, default=4)

    sub.add_parser("tightness", parents=[common], help="end-to-end tightness experiment")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    args.argv = argv
    if args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return EXIT_CONFIG
    try:
        emit = _Emitter(args)
        return HANDLERS[args.command](args, emit)
    except (ConfigError, ExperimentRefused, AlphabetError, FloydDelayError, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
