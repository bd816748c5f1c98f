"""Floyd functions, their rescaling, and Floyd-weighted distances.

The edge between g and gs gets Floyd length f(min(|g|, |gs|)).  Distances are
bracketed inside a finite ball: the upper end is a shortest path that stays
in the ball, the lower end additionally lets any path that reaches the
boundary sphere travel outside for free.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .cayley import SphereTable, enumerate_ball, geodesic_path
from .groups import GroupBackend

__all__ = [
    "FloydDelayError",
    "FloydFunction",
    "FloydBracket",
    "FloydGraph",
    "make_floyd_function",
    "rescale_floyd",
    "floyd_distance_bracket",
    "separation_probe",
    "SeparationReport",
]

KINDS = ("polynomial_inverse_square", "exponential", "table", "rescaled")
_ALIASES = {"poly": "polynomial_inverse_square", "polynomial": "polynomial_inverse_square", "exp": "exponential"}


class FloydDelayError(ValueError):
    def __init__(self, n: int, ratio: float):
        self.n = n
        self.ratio = ratio
        super().__init__(f"delay condition violated at n={n}: f(n+1)/f(n) = {ratio!r}")


@dataclass(frozen=True)
class FloydFunction:
    kind: str
    params: tuple
    probe_N: int
    delay_inf: float
    delay_sup: float
    _f: Callable[[int], float] = field(repr=False, compare=False)
    _tail: Callable[[int], float] = field(repr=False, compare=False)

    def __call__(self, n: int) -> float:
        if n < 0:
            raise ValueError("Floyd functions are defined on n >= 0")
        return self._f(n)

    def values(self, N: int) -> list[float]:
        return [self._f(n) for n in range(N)]

    def tail(self, R: int) -> float:
        """Upper bound on sum_{k >= R} f(k)."""
        return self._tail(max(R, 0))

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": list(self.params),
            "probe_N": self.probe_N,
            "delay_inf": self.delay_inf,
            "delay_sup": self.delay_sup,
        }


def _probe(f: Callable[[int], float], probe_N: int) -> tuple[float, float]:
    lo, hi = math.inf, -math.inf
    for n in range(probe_N):
        a, b = f(n), f(n + 1)
        if not a > 0:
            raise FloydDelayError(n, math.nan)
        r = b / a
        if not 0 < r < 1:
            raise FloydDelayError(n, r)
        lo, hi = min(lo, r), max(hi, r)
    return lo, hi


def _poly_tail(R: int) -> float:
    # f(R) + integral_R^inf dx / (x^2 + 1)
    return 1.0 / (R * R + 1) + (math.pi / 2 - math.atan(R))


def make_floyd_function(kind: str, params: Sequence = (), probe_N: int = 100) -> FloydFunction:
    """Build and validate a Floyd function.

    ``polynomial_inverse_square``: f(n) = 1/(n^2+1), no parameters.
    ``exponential``: f(n) = lam^n with 0 < lam < 1.
    ``table``: explicit values f(0..m-1); continued geometrically with the
    last ratio so the function is defined and summable on all of N.
    """
    kind = _ALIASES.get(kind, kind)
    params = tuple(params)
    if kind == "polynomial_inverse_square":
        f = lambda n: 1.0 / (n * n + 1)
        tail = _poly_tail
    elif kind == "exponential":
        if len(params) != 1:
            raise ValueError("exponential Floyd function takes one parameter (lam)")
        lam = float(params[0])
        if not 0 < lam < 1:
            raise ValueError(f"lam must lie in (0, 1), got {lam}")
        f = lambda n: lam ** n
        tail = lambda R: lam ** R / (1 - lam)
    elif kind == "table":
        vals = [float(v) for v in params]
        if len(vals) < 2:
            raise ValueError("table Floyd function needs at least two values")
        _probe(lambda n: vals[n], len(vals) - 1)
        q = vals[-1] / vals[-2]
        m = len(vals)

        def f(n: int) -> float:
            return vals[n] if n < m else vals[-1] * q ** (n - m + 1)

        def tail(R: int) -> float:
            head = math.fsum(vals[R:]) if R < m else 0.0
            return head + f(max(R, m)) / (1 - q)
    else:
        raise ValueError(f"unknown Floyd function kind {kind!r}; choose from {KINDS}")
    lo, hi = _probe(f, probe_N)
    return FloydFunction(kind, params, probe_N, lo, hi, f, tail)


def _double(f: Callable[[int], float]) -> Callable[[int], float]:
    def g(n: int) -> float:
        if n == 0:
            return f(0)
        half, odd = divmod(n, 2)
        if not odd:
            return f(half)
        return (f(half) + f(half + 1)) / 2

    return g


def rescale_floyd(f: FloydFunction, K: int, probe_N: int | None = None) -> FloydFunction:
    """Stretch ``f`` by a factor K (a power of two) by repeated doubling.

    One doubling sets g(2n) = f(n) and g(2n-1) = (f(n-1) + f(n)) / 2, with
    g(0) = f(0).  Each doubling maps a delay bound lam to 2 lam / (1 + lam).
    """
    if K < 1 or K & (K - 1):
        raise ValueError(f"rescaling factor must be a power of two, got {K}")
    probe_N = f.probe_N if probe_N is None else probe_N
    g = f._f
    tail = f._tail
    k = K
    while k > 1:
        g = _double(g)
        tail = (lambda t: lambda R: 2 * t(R // 2))(tail)
        k //= 2
    lo, hi = _probe(g, probe_N)
    return FloydFunction("rescaled", (f.kind, f.params, K), probe_N, lo, hi, g, tail)


@dataclass(frozen=True)
class FloydBracket:
    lower: float
    upper: float
    radius_used: int

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "radius_used": self.radius_used}


class FloydGraph:
    """Floyd-weighted Cayley graph restricted to the radius-R ball."""

    def __init__(self, backend: GroupBackend, f: FloydFunction, R: int, table: SphereTable | None = None):
        if table is None or table.radius < R:
            table = enumerate_ball(backend, R)
        elif table.radius > R:
            table = table.truncate(R)
        self.backend = backend
        self.f = f
        self.R = R
        self.table = table
        self.vertices = table.elements()
        self.index = {g: i for i, g in enumerate(self.vertices)}
        length = table.index
        rows, cols, weights = [], [], []
        for i, g in enumerate(self.vertices):
            lg = length[g]
            for x in backend.letters:
                y = backend.step(g, x)
                j = self.index.get(y)
                if j is None or j == i:
                    continue
                rows.append(i)
                cols.append(j)
                weights.append(f(min(lg, length[y])))
        n = len(self.vertices)
        # duplicate (i, j) entries from involutive letters carry equal weights;
        # csr_matrix would add them, so keep one
        pairs = {}
        for i, j, w in zip(rows, cols, weights):
            pairs[(i, j)] = w
        r = np.fromiter((p[0] for p in pairs), dtype=np.int64, count=len(pairs))
        c = np.fromiter((p[1] for p in pairs), dtype=np.int64, count=len(pairs))
        w = np.fromiter(pairs.values(), dtype=float, count=len(pairs))
        self.matrix = csr_matrix((w, (r, c)), shape=(n, n))
        self.boundary = np.array([self.index[g] for g in table.spheres[R]], dtype=np.int64)
        self._cache: dict[int, np.ndarray] = {}

    def _from(self, g: str) -> np.ndarray:
        i = self.index[g]
        d = self._cache.get(i)
        if d is None:
            d = dijkstra(self.matrix, directed=False, indices=i)
            self._cache[i] = d
        return d

    def shortest(self, u: str, v: str) -> float:
        """Length of the Floyd-shortest path from u to v inside the ball."""
        return float(self._from(u)[self.index[v]])

    def exit_cost(self, u: str) -> float:
        return float(self._from(u)[self.boundary].min())

    def path_length(self, path: Sequence[str]) -> float:
        length = self.table.index
        return math.fsum(self.f(min(length[a], length[b])) for a, b in zip(path, path[1:]))

    def bracket(self, u: str, v: str) -> FloydBracket:
        u = self.backend.reduce(u)
        v = self.backend.reduce(v)
        length = self.table.index
        for g in (u, v):
            if g not in length or length[g] > self.R - 1:
                raise ValueError(f"{g!r} must lie in the radius-{self.R - 1} ball")
        if u == v:
            return FloydBracket(0.0, 0.0, self.R)
        if self.backend.tree_like and self.backend.geodesic_normal_forms:
            # every u-v path in a tree crosses each edge of the geodesic [u, v]
            # (whose vertices stay within max(|u|, |v|)), so both ends agree
            exact = self.path_length(geodesic_path(u, v, self.backend))
            return FloydBracket(exact, exact, self.R)
        upper = self.shortest(u, v)
        lower = min(upper, self.exit_cost(u) + self.exit_cost(v))
        return FloydBracket(lower, upper, self.R)


def floyd_distance_bracket(u: str, v: str, backend: GroupBackend, f: FloydFunction, R: int,
                           graph: FloydGraph | None = None) -> FloydBracket:
    if graph is None:
        graph = FloydGraph(backend, f, R)
    return graph.bracket(u, v)


@dataclass
class SeparationReport:
    rays: list[str]
    points: list[str]
    depth: int
    radius: int
    threshold: float
    brackets: list[list[FloydBracket]]

    @property
    def min_lower(self) -> float:
        k = len(self.points)
        return min(self.brackets[i][j].lower for i in range(k) for j in range(k) if i != j)

    @property
    def separated(self) -> bool:
        return self.min_lower > self.threshold

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["ray_i", "ray_j", "lower", "upper", "radius"])
        for i, ri in enumerate(self.rays):
            for j, rj in enumerate(self.rays):
                b = self.brackets[i][j]
                w.writerow([ri or ".", rj or ".", repr(b.lower), repr(b.upper), b.radius_used])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "rays": self.rays,
            "points": self.points,
            "depth": self.depth,
            "radius": self.radius,
            "threshold": self.threshold,
            "min_lower": self.min_lower,
            "separated": self.separated,
            "brackets": [[b.to_dict() for b in row] for row in self.brackets],
        }


def separation_probe(rays: Sequence[str], backend: GroupBackend, f: FloydFunction, depth: int, R: int,
                     threshold: float = 1.0) -> SeparationReport:
    """Pairwise Floyd brackets between ray points r_i^depth.

    A finite-scale diagnostic for at least three boundary points: the report
    is "separated" when every off-diagonal lower bound exceeds ``threshold``.
    """
    if len(rays) < 3:
        raise ValueError(f"separation probe needs at least 3 rays, got {len(rays)}")
    rays = [backend.reduce(r) for r in rays]
    for r in rays:
        g = ""
        for k in range(1, depth + 1):
            g = backend.multiply(g, r)
            if not g:
                raise ValueError(f"ray {r!r} has finite order dividing {k}")
    points = [backend.power(r, depth) for r in rays]
    graph = FloydGraph(backend, f, R)
    brackets = [[graph.bracket(p, q) for q in points] for p in points]
    return SeparationReport(list(rays), points, depth, R, threshold, brackets)
