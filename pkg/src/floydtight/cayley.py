"""Metric balls in the Cayley graph and word-metric queries."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ._parallel import chunk, map_shards
from .groups import IDENTITY, GroupBackend

__all__ = [
    "BudgetExceeded",
    "SphereTable",
    "enumerate_ball",
    "word_length",
    "geodesic_word",
    "geodesic_path",
    "distance",
    "DEFAULT_MAX_ELEMENTS",
]

# about twice the radius-12 ball of F2
DEFAULT_MAX_ELEMENTS = 2_500_000
# frontiers smaller than this are expanded inline even with workers > 1
_MIN_SHARD = 2048


class BudgetExceeded(RuntimeError):
    """Enumeration stopped early; ``partial`` holds the completed radii."""

    def __init__(self, message: str, partial: "SphereTable | None" = None):
        super().__init__(message)
        self.partial = partial

    @property
    def last_radius(self) -> int:
        return -1 if self.partial is None else self.partial.radius


@dataclass
class SphereTable:
    """Ball of radius ``radius`` stratified by word length.

    ``next_count`` optionally holds b_{R+1} (count only, elements not kept);
    growth ratios at n = R need it.
    """

    backend: GroupBackend
    spheres: list[list[str]]
    next_count: int | None = None
    _index: dict[str, int] | None = field(default=None, repr=False, compare=False)

    @property
    def radius(self) -> int:
        return len(self.spheres) - 1

    @property
    def counts(self) -> list[int]:
        return [len(s) for s in self.spheres]

    @property
    def cumulative(self) -> list[int]:
        out, total = [], 0
        for s in self.spheres:
            total += len(s)
            out.append(total)
        return out

    def __len__(self) -> int:
        return sum(len(s) for s in self.spheres)

    def __contains__(self, g: str) -> bool:
        return g in self.index

    @property
    def index(self) -> dict[str, int]:
        """Map element -> word length, built lazily."""
        if self._index is None:
            self._index = {g: n for n, s in enumerate(self.spheres) for g in s}
        return self._index

    def elements(self) -> list[str]:
        return [g for s in self.spheres for g in s]

    def length(self, g: str) -> int:
        try:
            return self.index[g]
        except KeyError:
            raise KeyError(f"{g!r} is outside the radius-{self.radius} ball") from None

    def truncate(self, radius: int) -> "SphereTable":
        if radius > self.radius:
            raise ValueError("cannot truncate to a larger radius")
        nxt = len(self.spheres[radius + 1]) if radius < self.radius else self.next_count
        return SphereTable(self.backend, self.spheres[: radius + 1], nxt)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "b_n", "B_n"])
        for n, (b, B) in enumerate(zip(self.counts, self.cumulative)):
            w.writerow([n, b, B])
        return buf.getvalue()

    def dump_elements(self) -> str:
        """One normal word per line, spheres separated by a ``# n`` header."""
        lines = []
        for n, s in enumerate(self.spheres):
            lines.append(f"# {n}")
            lines.extend(g if g else "." for g in s)
        return "\n".join(lines) + "\n"


def _expand(shard: Sequence[str], backend: GroupBackend) -> set[str]:
    step = backend.step
    letters = backend.letters
    return {step(g, x) for g in shard for x in letters}


def _count_tree_children(shard: Sequence[str], backend: GroupBackend) -> int:
    # in a tree every element of the next sphere has exactly one parent
    step = backend.step
    n = 0
    for g in shard:
        L = len(g)
        for x in backend.letters:
            if len(step(g, x)) > L:
                n += 1
    return n


def _next_sphere(backend: GroupBackend, prev: Sequence[str], current: Sequence[str], workers: int) -> list[str]:
    if workers > 1 and len(current) >= _MIN_SHARD:
        parts = map_shards(_expand, chunk(current, workers), workers, backend)
        found = set().union(*parts)
    else:
        found = _expand(current, backend)
    found.difference_update(prev)
    found.difference_update(current)
    return sorted(found, key=backend.alphabet.shortlex_key)


def enumerate_ball(
    backend: GroupBackend,
    R: int,
    *,
    workers: int = 1,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
    lookahead: bool = False,
) -> SphereTable:
    """Breadth-first frontier expansion of the radius-``R`` ball.

    Sphere n is the set of neighbours of sphere n-1 outside spheres n-1 and
    n-2, so the stratification is by true word length for every backend.
    With ``lookahead`` the size of sphere R+1 is counted as well.
    """
    if R < 0:
        raise ValueError("radius must be >= 0")
    spheres: list[list[str]] = [[IDENTITY]]
    total = 1
    target = R + 1 if lookahead else R
    prev: list[str] = []
    for n in range(1, target + 1):
        if n == R + 1 and backend.tree_like and backend.geodesic_normal_forms:
            shards = chunk(spheres[-1], workers if len(spheres[-1]) >= _MIN_SHARD else 1)
            count = sum(map_shards(_count_tree_children, shards, workers, backend))
            return SphereTable(backend, spheres, count)
        nxt = _next_sphere(backend, prev, spheres[-1], workers)
        if n == R + 1:
            return SphereTable(backend, spheres, len(nxt))
        total += len(nxt)
        if total > max_elements:
            raise BudgetExceeded(
                f"ball of radius {n} exceeds {max_elements} elements "
                f"(last completed radius {n - 1})",
                SphereTable(backend, spheres),
            )
        prev = spheres[-1]
        spheres.append(nxt)
    return SphereTable(backend, spheres)


def _bfs_parents(backend: GroupBackend, target: str, max_elements: int) -> dict[str, tuple[str, str] | None]:
    """Breadth-first search from the identity, letters tried in declared order.

    The first discovery of a vertex comes through its shortlex-least geodesic
    because each frontier is processed in shortlex order of those geodesics.
    """
    parents: dict[str, tuple[str, str] | None] = {IDENTITY: None}
    frontier = [IDENTITY]
    while frontier and target not in parents:
        nxt = []
        for g in frontier:
            for x in backend.letters:
                y = backend.step(g, x)
                if y not in parents:
                    parents[y] = (g, x)
                    nxt.append(y)
        if len(parents) > max_elements:
            break
        frontier = nxt
    return parents


def word_length(g: str, backend: GroupBackend, *, max_elements: int = DEFAULT_MAX_ELEMENTS) -> int:
    """d_S(1, g); breadth-first search when normal forms are not geodesic."""
    g = backend.reduce(g)
    if backend.geodesic_normal_forms:
        return len(g)
    return len(geodesic_word(g, backend, max_elements=max_elements))


def geodesic_word(g: str, backend: GroupBackend, *, max_elements: int = DEFAULT_MAX_ELEMENTS) -> str:
    """Shortlex-least geodesic word evaluating to ``g``."""
    g = backend.reduce(g)
    if backend.geodesic_normal_forms:
        # normal forms are shortlex-least representatives by construction
        return g
    parents = _bfs_parents(backend, g, max_elements)
    if g not in parents:
        raise BudgetExceeded(f"{g!r} not reached within {max_elements} elements")
    letters = []
    while parents[g] is not None:
        g, x = parents[g]
        letters.append(x)
    return "".join(reversed(letters))


def distance(u: str, v: str, backend: GroupBackend) -> int:
    return word_length(backend.multiply(backend.invert(u), v), backend)


def geodesic_path(u: str, v: str, backend: GroupBackend) -> list[str]:
    """Vertices of the certified geodesic from ``u`` to ``v``."""
    word = geodesic_word(backend.multiply(backend.invert(u), v), backend)
    path = [u]
    g = u
    for x in word:
        g = backend.step(g, x)
        path.append(g)
    return path


def path_vertices(start: str, word: Iterable[str], backend: GroupBackend) -> list[str]:
    """Vertices visited by reading ``word`` from ``start`` letter by letter."""
    path = [start]
    g = start
    for x in word:
        g = backend.step(g, x)
        path.append(g)
    return path
