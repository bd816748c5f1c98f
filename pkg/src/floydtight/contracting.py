"""Nearest-point projections, axes in tree-like groups, and empirical checks
of the contracting-set toolkit (thin triangles, bounded intersection,
bounded projection, admissible paths).

All distances are word-metric distances computed through the backend, so a
check is exact as long as the points involved are honest group elements.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from ._parallel import chunk, map_shards
from .cayley import SphereTable, distance, enumerate_ball, geodesic_path, path_vertices, word_length
from .groups import GroupBackend

__all__ = [
    "EMPTY",
    "FiniteSubset",
    "subset",
    "AxisSpec",
    "ContractionProfile",
    "Segment",
    "AdmissiblePath",
    "AdmissibilityVerdict",
    "MalformedPathError",
    "project",
    "project_set",
    "diameter",
    "set_distance",
    "axis_of",
    "cyclic_reduction",
    "contraction_profile",
    "bounded_intersection_profile",
    "bounded_projection_check",
    "thin_triangle_check",
    "validate_admissible",
    "rnear_check",
]

# diameter of the empty set
EMPTY = -math.inf


@dataclass(frozen=True)
class FiniteSubset:
    elements: frozenset
    generator_rule: str = ""

    def __post_init__(self):
        if not self.elements:
            raise ValueError("FiniteSubset must be nonempty")

    def __contains__(self, g: str) -> bool:
        return g in self.elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def translate(self, g: str, backend: GroupBackend) -> "FiniteSubset":
        rule = f"{g or '1'}.({self.generator_rule})" if self.generator_rule else ""
        return FiniteSubset(frozenset(backend.multiply(g, x) for x in self.elements), rule)


def subset(elements: Iterable[str], backend: GroupBackend, rule: str = "") -> FiniteSubset:
    return FiniteSubset(frozenset(backend.reduce(x) for x in elements), rule)


def diameter(points: Iterable[str], backend: GroupBackend) -> float:
    pts = sorted(set(points), key=backend.alphabet.shortlex_key)
    if not pts:
        return EMPTY
    best = 0
    for i, p in enumerate(pts):
        for q in pts[i + 1:]:
            best = max(best, distance(p, q, backend))
    return best


def _distances_to(X: FiniteSubset, y: str, backend: GroupBackend) -> list[tuple[int, str]]:
    yi = backend.invert(y)
    return [(word_length(backend.multiply(yi, x), backend), x) for x in X.elements]


def set_distance(y: str, X: FiniteSubset, backend: GroupBackend) -> int:
    return min(d for d, _ in _distances_to(X, y, backend))


def project(X: FiniteSubset, y: str, backend: GroupBackend) -> FiniteSubset:
    """All points of X at minimal distance from y."""
    if not X.elements:
        raise ValueError("cannot project to an empty set")
    y = backend.reduce(y)
    ds = _distances_to(X, y, backend)
    m = min(d for d, _ in ds)
    return FiniteSubset(frozenset(x for d, x in ds if d == m), f"proj({y or '1'})")


def project_set(X: FiniteSubset, ys: Iterable[str], backend: GroupBackend) -> frozenset:
    out: set[str] = set()
    for y in ys:
        out |= project(X, y, backend).elements
    return frozenset(out)


def cyclic_reduction(h: str, backend: GroupBackend) -> tuple[str, str]:
    """Write a reduced word h as u c u^-1 with c cyclically reduced."""
    h = backend.reduce(h)
    inv = backend.alphabet.inv
    i, j = 0, len(h) - 1
    while i < j and h[i] == inv(h[j]):
        i += 1
        j -= 1
    return h[:i], h[i:j + 1]


@dataclass(frozen=True)
class AxisSpec:
    h: str
    root: str
    conjugator: str
    radius: int
    subset: FiniteSubset

    @property
    def elements(self) -> frozenset:
        return self.subset.elements

    def sorted_elements(self, backend: GroupBackend) -> list[str]:
        return backend.alphabet.sorted(self.subset.elements)


def axis_of(h: str, backend: GroupBackend, R: int) -> AxisSpec:
    """The axis u.{prefixes of c^(+-inf)} of h = u c u^-1, cut to the radius-R ball.

    Only tree-like backends: there the bi-infinite reduced word is the unique
    geodesic line between the two fixed points of h.
    """
    if not backend.tree_like:
        raise NotImplementedError("axes are only available for tree-like backends")
    h = backend.reduce(h)
    if not h:
        raise ValueError("the identity has no axis")
    u, c = cyclic_reduction(h, backend)
    if len(c) == 1 and backend.alphabet.inv(c) == c:
        raise ValueError(f"{h!r} is a torsion element")
    points = set()
    for core in (c, backend.invert(c)):
        g = u
        k = 0
        while len(g) <= R:
            points.add(g)
            g = backend.step(g, core[k % len(core)])
            k += 1
            if k > 4 * (R + len(core)) + 4:
                break
    if not points:
        raise ValueError(f"axis of {h!r} misses the radius-{R} ball")
    rule = f"axis({h})" if not u else f"{u}.axis({c})"
    return AxisSpec(h, c, u, R, FiniteSubset(frozenset(points), rule))


@dataclass
class ContractionProfile:
    mu_grid: list[int]
    eps_observed: list[float | None]
    qualifying: list[int]
    sample_count: int
    seed: int

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["mu", "eps_obs", "samples"])
        for mu, eps, k in zip(self.mu_grid, self.eps_observed, self.qualifying):
            w.writerow([mu, "unsampled" if eps is None else eps, k])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "mu_grid": self.mu_grid,
            "eps_observed": self.eps_observed,
            "qualifying": self.qualifying,
            "sample_count": self.sample_count,
            "seed": self.seed,
        }


def _sample_geodesic(i: int, seed: int, table: SphereTable) -> list[str]:
    rng = np.random.default_rng([seed, i])
    r1, r2 = rng.integers(0, table.radius + 1, size=2)
    s1, s2 = table.spheres[r1], table.spheres[r2]
    y1 = s1[rng.integers(len(s1))]
    y2 = s2[rng.integers(len(s2))]
    return geodesic_path(y1, y2, table.backend)


def _profile_shard(indices: Sequence[int], seed: int, table: SphereTable, X: FiniteSubset) -> list[tuple[int, float]]:
    backend = table.backend
    out = []
    for i in indices:
        q = _sample_geodesic(i, seed, table)
        d = min(set_distance(v, X, backend) for v in q)
        out.append((d, diameter(project_set(X, q, backend), backend)))
    return out


def contraction_profile(X: FiniteSubset, backend: GroupBackend, samples: int, seed: int = 0, *,
                        radius: int, mu_grid: Sequence[int] = (0, 1, 2, 3),
                        table: SphereTable | None = None, workers: int = 1) -> ContractionProfile:
    """Largest observed diam proj_X(q) over sampled geodesics q with d(q, X) >= mu.

    Sample i draws two radii uniformly in [0, radius], then one point
    uniformly from each sphere, from a generator seeded by (seed, i); q is the
    certified geodesic between them.  Results do not depend on ``workers``.
    """
    if table is None or table.radius < radius:
        table = enumerate_ball(backend, radius)
    elif table.radius > radius:
        table = table.truncate(radius)
    shards = chunk(list(range(samples)), workers)
    parts = map_shards(_profile_shard, shards, workers, seed, table, X)
    results = [r for p in parts for r in p]
    eps: list[float | None] = []
    counts = []
    for mu in mu_grid:
        diams = [dm for d, dm in results if d >= mu]
        counts.append(len(diams))
        eps.append(max(diams) if diams else None)
    return ContractionProfile(list(mu_grid), eps, counts, samples, seed)


def _neighbourhood_distances(X: FiniteSubset, table: SphereTable, max_u: int) -> dict[str, int]:
    """Multi-source BFS from X inside the ball, up to depth max_u."""
    backend = table.backend
    inside = table.index
    dist = {x: 0 for x in X.elements if x in inside}
    frontier = backend.alphabet.sorted(dist)
    for d in range(1, max_u + 1):
        nxt = []
        for g in frontier:
            for s in backend.letters:
                y = backend.step(g, s)
                if y in inside and y not in dist:
                    dist[y] = d
                    nxt.append(y)
        frontier = nxt
    return dist


def bounded_intersection_profile(X: FiniteSubset, X2: FiniteSubset, U_grid: Sequence[int],
                                 backend: GroupBackend, radius: int,
                                 table: SphereTable | None = None) -> list[float]:
    """diam(N_U(X) cap N_U(X2)) within the ball, per U; EMPTY when disjoint.

    Neighbourhoods are taken along paths inside the ball.
    """
    if table is None or table.radius < radius:
        table = enumerate_ball(backend, radius)
    top = max(U_grid) if U_grid else 0
    d1 = _neighbourhood_distances(X, table, top)
    d2 = _neighbourhood_distances(X2, table, top)
    out = []
    for U in U_grid:
        common = [g for g, d in d1.items() if d <= U and d2.get(g, top + 1) <= U]
        out.append(diameter(common, backend))
    return out


def bounded_projection_check(X: FiniteSubset, X2: FiniteSubset, backend: GroupBackend) -> float:
    """max(diam proj_X(X2), diam proj_X2(X))."""
    a = diameter(project_set(X, X2.elements, backend), backend)
    b = diameter(project_set(X2, X.elements, backend), backend)
    return max(a, b)


@dataclass(frozen=True)
class ThinTriangle:
    sigma_observed: int
    projections: tuple[str, ...]
    geodesic: tuple[str, ...]


def thin_triangle_check(X: FiniteSubset, x: str, y: str, backend: GroupBackend) -> ThinTriangle:
    """max over projection points o of y of d(o, [x, y]), with [x, y] the certified geodesic."""
    x, y = backend.reduce(x), backend.reduce(y)
    if x not in X:
        raise ValueError(f"{x!r} is not in X")
    if y in X:
        raise ValueError(f"{y!r} must lie outside X")
    path = geodesic_path(x, y, backend)
    proj = backend.alphabet.sorted(project(X, y, backend).elements)
    sigma = max(min(distance(o, v, backend) for v in path) for o in proj)
    return ThinTriangle(sigma, tuple(proj), tuple(path))


class MalformedPathError(ValueError):
    pass


@dataclass(frozen=True)
class Segment:
    """A geodesic read from ``start`` along ``label``; ``anchor`` is its
    associated contracting set when the segment is one of the p_i."""

    start: str
    label: str
    anchor: FiniteSubset | None = None

    def vertices(self, backend: GroupBackend) -> list[str]:
        return path_vertices(self.start, self.label, backend)

    def end(self, backend: GroupBackend) -> str:
        return self.vertices(backend)[-1]

    def __len__(self) -> int:
        return len(self.label)


@dataclass
class AdmissiblePath:
    segments: list[Segment]
    D: float
    tau: float
    meta: dict = field(default_factory=dict)

    @property
    def anchored(self) -> list[int]:
        return [i for i, s in enumerate(self.segments) if s.anchor is not None]

    def start(self) -> str:
        return self.segments[0].start

    def end(self, backend: GroupBackend) -> str:
        return self.segments[-1].end(backend)


@dataclass(frozen=True)
class AdmissibilityVerdict:
    valid: bool
    condition: int | None = None
    segment: int | None = None
    detail: str = ""
    tau_observed: float = 0.0

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "condition": self.condition,
            "segment": self.segment,
            "detail": self.detail,
            "tau_observed": self.tau_observed,
        }


def validate_admissible(path: AdmissiblePath, backend: GroupBackend) -> AdmissibilityVerdict:
    """Check the three admissibility conditions in order; report the first failure.

    (1) consecutive segments alternate, exactly one carrying an anchor set that
    contains both its endpoints; (2) anchored segments other than the first and
    last are longer than D; (3) every unanchored segment sharing an endpoint
    with an anchored one has projections of diameter at most tau onto its set.
    """
    segs = path.segments
    if not segs:
        raise MalformedPathError("empty segment sequence")
    ends = []
    for i, s in enumerate(segs):
        if word_length(s.label, backend) != len(s.label):
            raise MalformedPathError(f"segment {i} label {s.label!r} is not a geodesic")
        ends.append(s.end(backend))
        if i and segs[i].start != ends[i - 1]:
            raise MalformedPathError(f"segment {i} does not start where segment {i - 1} ends")

    for i, s in enumerate(segs):
        if s.anchor is not None and (s.start not in s.anchor or ends[i] not in s.anchor):
            return AdmissibilityVerdict(False, 1, i, "anchored segment leaves its set")
        if i and (segs[i - 1].anchor is None) == (s.anchor is None):
            return AdmissibilityVerdict(False, 1, i, "segments do not alternate")

    last = len(segs) - 1
    for i in path.anchored:
        if 0 < i < last and not len(segs[i]) > path.D:
            return AdmissibilityVerdict(False, 2, i, f"length {len(segs[i])} <= D = {path.D}")

    tau_seen = 0.0
    for i in path.anchored:
        X = segs[i].anchor
        for j in (i - 1, i + 1):
            if 0 <= j <= last:
                diam = diameter(project_set(X, segs[j].vertices(backend), backend), backend)
                tau_seen = max(tau_seen, diam)
                if diam > path.tau:
                    return AdmissibilityVerdict(
                        False, 3, j, f"diam proj = {diam} > tau = {path.tau}", tau_seen
                    )
    return AdmissibilityVerdict(True, tau_observed=tau_seen)


@dataclass
class RnearReport:
    entries: list[tuple[int, int] | None]
    geodesic: list[str]
    mu: int

    @property
    def violations(self) -> list[int]:
        return [i for i, e in enumerate(self.entries) if e is None]

    @property
    def R_observed(self) -> float:
        vals = [max(e) for e in self.entries if e is not None]
        return max(vals) if vals else 0

    def to_dict(self) -> dict:
        return {
            "entries": [list(e) if e is not None else None for e in self.entries],
            "R_observed": self.R_observed,
            "violations": self.violations,
            "mu": self.mu,
        }


def rnear_check(path: AdmissiblePath, backend: GroupBackend, mu: int = 0) -> RnearReport:
    """For each anchor X_i: first/last points z, w of alpha in N_mu(X_i) and
    their distances to the anchored segment's start and end.

    alpha is the certified geodesic between the path endpoints.
    """
    alpha = geodesic_path(path.start(), path.end(backend), backend)
    entries: list[tuple[int, int] | None] = []
    for i in path.anchored:
        seg = path.segments[i]
        near = [v for v in alpha if set_distance(v, seg.anchor, backend) <= mu]
        if not near:
            entries.append(None)
            continue
        z, w = near[0], near[-1]
        entries.append((distance(z, seg.start, backend), distance(w, seg.end(backend), backend)))
    return RnearReport(entries, alpha, mu)
