"""Acceptance criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` or directly with
``python -m tests.test_acceptance``.  Lines are printed even when output
capture is on.
"""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from floydtight.cayley import enumerate_ball
from floydtight.cli import main as cli_main, strip_metadata
from floydtight.config import load_config
from floydtight.contracting import axis_of, bounded_projection_check, contraction_profile
from floydtight.floyd import FloydGraph, make_floyd_function, rescale_floyd
from floydtight.groups import preset
from floydtight.growth import critical_bracket, growth_rate_estimate, poincare_identity_residual
from floydtight.quotient import minimal_reps, wordmetric_sweep
from floydtight.tightness import orthogonality_check

from .oracles import tree_floyd_length

LN3 = math.log(3)
H = "abAB"

pytestmark = pytest.mark.slow


def _line(n: int, ok: bool, detail: str) -> str:
    return f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"


_BALL_PROBE = """
import json, resource, time
from floydtight import enumerate_ball, preset
t0 = time.perf_counter()
t = enumerate_ball(preset("f2"), 12)
dt = time.perf_counter() - t0
print(json.dumps({"counts": t.counts, "seconds": dt,
                  "maxrss_kb": resource.getrusage(resource.RUSAGE_SELF).ru_maxrss}))
"""


def criterion_1():
    out = subprocess.run([sys.executable, "-c", _BALL_PROBE], capture_output=True, text=True, check=True)
    rep = json.loads(out.stdout)
    counts = rep["counts"]
    exact = counts[0] == 1 and all(counts[n] == 4 * 3 ** (n - 1) for n in range(1, 13))
    mem_gb = rep["maxrss_kb"] / 2 ** 20
    ok = exact and rep["seconds"] < 60 and mem_gb < 2
    return ok, f"F2 ball 12 exact={exact}, {rep['seconds']:.1f} s, peak {mem_gb:.2f} GB"


def criterion_2():
    t = enumerate_ball(preset("z2"), 50)
    ok = all(t.counts[n] == 4 * n for n in range(1, 51))
    ok = ok and all(t.cumulative[n] == 2 * n * n + 2 * n + 1 for n in range(51))
    return ok, f"Z2 b_n = 4n and B_n = 2n^2+2n+1 for n <= 50: {ok}"


def criterion_3():
    t = enumerate_ball(preset("f2"), 12, lookahead=True)
    br = critical_bracket(t)
    ratio = growth_rate_estimate(t).ratio[12]
    z_ratio = growth_rate_estimate(enumerate_ball(preset("z"), 20, lookahead=True)).ratio[20]
    ok = LN3 <= br.hi_certified <= LN3 + 0.06 and abs(ratio - LN3) < 1e-3 and z_ratio <= 0.05
    return ok, (f"F2 hi={br.hi_certified:.5f} in [ln3, ln3+0.06], |ratio-ln3|={abs(ratio - LN3):.2e}; "
                f"Z ratio={z_ratio:.4f}")


def criterion_4():
    t = enumerate_ball(preset("f2"), 10)
    res = {s: poincare_identity_residual(t, s) for s in (0.5, 1.2, 3.0)}
    worst = max(res.values())
    return worst < 1e-12, f"max Poincare residual {worst:.2e} (< 1e-12)"


def criterion_5():
    bad = []
    for name in ("f2", "z2", "z2z3"):
        B = enumerate_ball(preset(name), 12).cumulative
        bad += [(name, n, m) for n in range(13) for m in range(13 - n) if B[n + m] > B[n] * B[m]]
    return not bad, f"B_(n+m) <= B_n B_m for n+m <= 12 on f2, z2, z2z3; violations {len(bad)}"


def criterion_6(f2_to_z2):
    checks = wordmetric_sweep(f2_to_z2, 4, 8)
    fails = [c for c in checks if not c.ok]
    return not fails, f"{len(checks)} cosets with d_bar <= 4 at source radius 8, failures {len(fails)}"


def criterion_7():
    f = make_floyd_function("polynomial_inverse_square")
    # endpoints must sit strictly inside the graph ball
    graph = FloydGraph(preset("f2"), f, 9)
    pts = enumerate_ball(preset("f2"), 8).elements()
    rng = np.random.default_rng(0)
    pairs = [(pts[i], pts[j]) for i, j in rng.integers(0, len(pts), size=(100, 2))]
    pairs += [("", "aba"), ("aaa", "bbb")]
    worst = 0.0
    for u, v in pairs:
        b = graph.bracket(u, v)
        exp = tree_floyd_length(u, v)
        worst = max(worst, abs(b.lower - exp), abs(b.upper - exp))
    ex1 = graph.bracket("", "aba")
    ex2 = graph.bracket("aaa", "bbb")
    ok = (worst < 1e-12 and abs(ex1.upper - 1.7) < 1e-12 and abs(ex1.lower - 1.7) < 1e-12
          and abs(ex2.upper - 3.4) < 1e-12 and abs(ex2.lower - 3.4) < 1e-12)
    return ok, f"102 tree brackets, max error {worst:.1e}; rho(1,aba)={ex1.upper:.12g}, rho(a3,b3)={ex2.upper:.12g}"


def criterion_8():
    g = rescale_floyd(make_floyd_function("exponential", [0.5], probe_N=200), 2)
    err = abs(g.delay_inf - 2 / 3)
    return err <= 1e-12, f"rescaled (1/2)^n delay_inf={g.delay_inf!r}, |err|={err:.1e}"


def criterion_9():
    f2 = preset("f2")
    X = axis_of("ab", f2, 8).subset
    prof = contraction_profile(X, f2, 500, 0, radius=8, mu_grid=(0, 1, 2, 3))
    eps = dict(zip(prof.mu_grid, prof.eps_observed))
    bp = bounded_projection_check(X, X.translate("bb", f2), f2)
    ok = all(eps[mu] == 0 for mu in (1, 2, 3)) and bp == 0 and min(prof.qualifying[1:]) > 0
    return ok, f"eps_observed by mu {eps}, qualifying {list(prof.qualifying)}, bounded projection {bp}"


def criterion_10(f2_to_z2):
    reps = minimal_reps(f2_to_z2, 5)
    taus = [orthogonality_check(g, H, f2_to_z2) for g in reps]
    return max(taus) <= 2, f"{len(reps)} minimal reps with |g| <= 5, tau_max={max(taus)}"


def _run_cli(argv, out_dir):
    code = cli_main([*argv, "--out", str(out_dir)])
    return code


def criterion_11(tmp_path):
    cfg = load_config("exp_f2_z2")
    t0 = time.perf_counter()
    code = _run_cli(["tightness", "--config", "exp_f2_z2"], tmp_path)
    dt = time.perf_counter() - t0
    rep = json.loads((tmp_path / "tightness.json").read_text())
    inj = rep["injectivity"] or {}
    good_s = [c["s"] for c in rep["certificates"] if c["certified"] and c["s"] >= 0.25]
    ok = (code == 0 and rep["n"] is not None and rep["n"] <= 8 and cfg.k_max == 3
          and inj.get("injective") and inj.get("complete") and bool(good_s)
          and rep["delta_G_hi_minus_delta_Gbar_ratio"] >= 0.8 and dt < 600)
    return ok, (f"n={rep['n']}, injective={inj.get('injective')}, certified s>=0.25: {good_s}, "
                f"gap={rep['delta_G_hi_minus_delta_Gbar_ratio']:.4f}, {dt:.1f} s")


# artifacts standing in for criteria 1-11 under the CLI
_DETERMINISM_RUNS = [
    ("ball_f2", ["ball", "--group", "f2", "--radius", "12", "--dump-elements"]),
    ("ball_z2", ["ball", "--group", "z2", "--radius", "50"]),
    ("growth_f2", ["growth", "--group", "f2", "--radius", "12", "--s", "0.5", "1.2", "3"]),
    ("growth_z", ["growth", "--group", "z", "--radius", "20"]),
    ("growth_z2z3", ["growth", "--group", "z2z3", "--radius", "12"]),
    ("quotient", ["quotient-check", "--config", "exp_f2_z2", "--radius", "8", "--max-dbar", "4"]),
    ("floyd", ["floyd", "--group", "f2", "--radius", "8", "--depth", "3"]),
    ("floyd_rescale", ["floyd", "--group", "f2", "--kind", "exp", "--lam", "0.5", "--probe-n", "200",
                       "--radius", "8"]),
    ("contract", ["contract", "--group", "f2", "-e", "ab", "--radius", "8", "--samples", "500",
                  "--other", "bbabBB"]),
    ("tightness", ["tightness", "--config", "exp_f2_z2"]),
]


def criterion_12(tmp_path):
    digests = {}
    failed_runs = []
    for workers in ("1", "4", "8"):
        for name, argv in _DETERMINISM_RUNS:
            d = tmp_path / f"{name}_w{workers}"
            if _run_cli([*argv, "--seed", "0", "--workers", workers], d) != 0:
                failed_runs.append(f"{name}_w{workers}")
            for p in sorted(d.iterdir()):
                text = p.read_text()
                if p.suffix == ".json":
                    text = json.dumps(strip_metadata(text), sort_keys=True)
                digests.setdefault((name, p.name), set()).add(text)
    differing = sorted(k for k, v in digests.items() if len(v) != 1)
    return not differing and not failed_runs, (f"{len(digests)} artifacts across workers 1, 4, 8; "
                                               f"differing {differing}, failed runs {failed_runs}")


def _check(n, fn, *args):
    ok, detail = fn(*args)
    line = _line(n, ok, detail)
    print(line, flush=True)
    return ok, line


@pytest.fixture
def shout(capsys):
    def _do(n, fn, *args):
        with capsys.disabled():
            ok, line = _check(n, fn, *args)
        assert ok, line
    return _do


def test_criterion_1(shout):
    shout(1, criterion_1)


def test_criterion_2(shout):
    shout(2, criterion_2)


def test_criterion_3(shout):
    shout(3, criterion_3)


def test_criterion_4(shout):
    shout(4, criterion_4)


def test_criterion_5(shout):
    shout(5, criterion_5)


def test_criterion_6(shout, f2_to_z2):
    shout(6, criterion_6, f2_to_z2)


def test_criterion_7(shout):
    shout(7, criterion_7)


def test_criterion_8(shout):
    shout(8, criterion_8)


def test_criterion_9(shout):
    shout(9, criterion_9)


def test_criterion_10(shout, f2_to_z2):
    shout(10, criterion_10, f2_to_z2)


def test_criterion_11(shout, tmp_path):
    shout(11, criterion_11, tmp_path)


def test_criterion_12(shout, tmp_path):
    shout(12, criterion_12, tmp_path)


if __name__ == "__main__":
    import tempfile
    from pathlib import Path

    from floydtight.groups import preset as _preset
    from floydtight.quotient import Epimorphism

    pi = Epimorphism(_preset("f2"), _preset("z2"), {"a": "a", "A": "A", "b": "b", "B": "B"})
    results = []
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        for n, fn, args in [
            (1, criterion_1, ()), (2, criterion_2, ()), (3, criterion_3, ()), (4, criterion_4, ()),
            (5, criterion_5, ()), (6, criterion_6, (pi,)), (7, criterion_7, ()), (8, criterion_8, ()),
            (9, criterion_9, ()), (10, criterion_10, (pi,)), (11, criterion_11, (tmp / "c11",)),
            (12, criterion_12, (tmp / "c12",)),
        ]:
            results.append(_check(n, fn, *args)[0])
    sys.exit(0 if all(results) else 1)
