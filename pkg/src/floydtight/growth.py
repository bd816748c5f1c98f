"""Growth-rate estimates and truncated Poincare series.

Fekete's lemma gives delta = inf_n n^-1 ln B_n for the submultiplicative
sequence B_n, so every ``upper`` value is a certified upper bound.  Nothing
finite certifies a lower bound; the ratio estimator is always labelled
heuristic.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable

from .cayley import SphereTable

__all__ = [
    "GrowthEstimate",
    "CriticalBracket",
    "growth_rate_estimate",
    "poincare_truncated",
    "poincare_identity_residual",
    "critical_bracket",
    "subset_series",
    "growth_csv",
]


@dataclass(frozen=True)
class GrowthEstimate:
    """``upper[n-1]`` is n^-1 ln B_n for n = 1..R; ``ratio[n]`` is ln(B_{n+1}/B_n)."""

    radius: int
    upper: tuple[float, ...]
    ratio: tuple[float, ...]

    @property
    def inf_upper(self) -> float:
        return min(self.upper)

    @property
    def extrapolated(self) -> float:
        return self.ratio[-1]


@dataclass(frozen=True)
class CriticalBracket:
    lo_heuristic: float
    hi_certified: float
    lo_certified: bool = False

    def contains(self, x: float) -> bool:
        return self.lo_heuristic <= x <= self.hi_certified

    def to_dict(self) -> dict:
        return {
            "lo_heuristic": self.lo_heuristic,
            "hi_certified": self.hi_certified,
            "lo_certified": self.lo_certified,
        }


def growth_rate_estimate(t: SphereTable) -> GrowthEstimate:
    """Fekete upper bounds and ratio estimates from a sphere table.

    The ratio at n = R uses ``t.next_count`` when present (enumerate with
    ``lookahead=True``); otherwise ratios stop at n = R-1.
    """
    if t.radius < 2:
        raise ValueError(f"growth estimate needs radius >= 2, got {t.radius}")
    B = t.cumulative
    if t.next_count is not None:
        B = B + [B[-1] + t.next_count]
    upper = tuple(math.log(B[n]) / n for n in range(1, t.radius + 1))
    ratio = tuple(math.log(B[n + 1] / B[n]) for n in range(len(B) - 1))
    return GrowthEstimate(t.radius, upper, ratio)


def poincare_truncated(t: SphereTable, s: float) -> tuple[float, float]:
    """Return (sum b_n e^{-sn}, sum B_n e^{-sn}) over n <= R."""
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    weights = [math.exp(-s * n) for n in range(t.radius + 1)]
    P = math.fsum(b * w for b, w in zip(t.counts, weights))
    P_cum = math.fsum(B * w for B, w in zip(t.cumulative, weights))
    return P, P_cum


def poincare_identity_residual(t: SphereTable, s: float) -> float:
    """|P_cum (1 - e^-s) - (P - B_R e^{-s(R+1)})|, zero in exact arithmetic."""
    P, P_cum = poincare_truncated(t, s)
    lhs = P_cum * -math.expm1(-s)
    rhs = math.fsum([P, -t.cumulative[-1] * math.exp(-s * (t.radius + 1))])
    return abs(lhs - rhs)


def critical_bracket(t: SphereTable) -> CriticalBracket:
    if t.radius < 4:
        raise ValueError(f"critical bracket needs radius >= 4, got {t.radius}")
    est = growth_rate_estimate(t)
    return CriticalBracket(lo_heuristic=est.extrapolated, hi_certified=est.inf_upper)


def subset_series(lengths: Iterable[int], s: float) -> float:
    """sum over a finite subset of e^{-s d(1, a)}, given the word lengths."""
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    return math.fsum(math.exp(-s * n) for n in lengths)


def growth_csv(t: SphereTable) -> str:
    """Columns n, b_n, B_n, upper_n, ratio_n; blank where undefined."""
    est = growth_rate_estimate(t)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "b_n", "B_n", "upper_n", "ratio_n"])
    for n, (b, B) in enumerate(zip(t.counts, t.cumulative)):
        up = repr(est.upper[n - 1]) if n >= 1 else ""
        ra = repr(est.ratio[n]) if n < len(est.ratio) else ""
        w.writerow([n, b, B, up, ra])
    return buf.getvalue()
