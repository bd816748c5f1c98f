"""Epimorphisms G -> G/Gamma, the quotient word metric, minimal
representatives and the section map.

The kernel Gamma is never materialised: g lies in Gamma iff its image
reduces to the identity in the target backend.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Mapping

from .cayley import SphereTable, enumerate_ball, word_length
from .groups import GroupBackend

__all__ = [
    "EpimorphismError",
    "Epimorphism",
    "MetricCheck",
    "MinimalRepSet",
    "SectionMap",
    "push_forward",
    "quotient_metric_check",
    "wordmetric_sweep",
    "coset_minima",
    "minimal_reps",
    "section",
    "coset_distance",
]


class EpimorphismError(ValueError):
    pass


@dataclass(frozen=True)
class Epimorphism:
    """pi: source -> target given on generators.

    Each source letter maps to a single target letter or to the empty word,
    so the target's alphabet is exactly the image generating set.
    """

    source: GroupBackend
    target: GroupBackend
    gen_map: Mapping[str, str]

    def __post_init__(self):
        src, tgt = self.source.alphabet, self.target.alphabet
        missing = [x for x in src.letters if x not in self.gen_map]
        if missing:
            raise EpimorphismError(f"unmapped source letters {missing!r}")
        for x in src.letters:
            y = self.gen_map[x]
            if len(y) > 1:
                raise EpimorphismError(f"{x!r} must map to one target letter or to the identity")
            tgt.check(y)
            if self.gen_map[src.inv(x)] != self.target.invert(y):
                raise EpimorphismError(f"generator map does not respect inverses at {x!r}")
        images = {self.gen_map[x] for x in src.letters} - {""}
        if set(tgt.letters) - images:
            raise EpimorphismError(
                f"target letters {sorted(set(tgt.letters) - images)!r} are not images of generators"
            )
        # images of the source 2-ball must cover the target 2-ball
        got = {push_forward(self, g) for g in enumerate_ball(self.source, 2).elements()}
        need = set(enumerate_ball(self.target, 2).elements())
        if not need <= got:
            raise EpimorphismError("image does not generate the target")

    def __call__(self, g: str) -> str:
        return push_forward(self, g)

    def in_kernel(self, g: str) -> bool:
        return push_forward(self, g) == ""

    def is_identity_map(self) -> bool:
        """Letters map to themselves and both sides are the same group."""
        src, tgt = self.source, self.target
        return (
            all(self.gen_map[x] == x for x in src.letters)
            and type(src) is type(tgt)
            and src.alphabet == tgt.alphabet
            and getattr(src, "rules", None) == getattr(tgt, "rules", None)
        )


def push_forward(pi: Epimorphism, g: str) -> str:
    pi.source.alphabet.check(g)
    gm = pi.gen_map
    return pi.target.reduce("".join(gm[x] for x in g))


@dataclass(frozen=True)
class MetricCheck:
    """Outcome of comparing d_bar(1, gbar) with d(1, pi^-1(gbar)).

    ``status`` is "equal", "mismatch" or "inconclusive" (coset not met inside
    the searched ball, which is not a counterexample).
    """

    gbar: str
    d_bar: int
    d_min: int | None
    witness: str | None
    status: str

    @property
    def ok(self) -> bool:
        return self.status == "equal"


@dataclass
class CosetMinima:
    radius: int
    length: dict[str, int]
    witness: dict[str, str]


def coset_minima(pi: Epimorphism, r: int, table: SphereTable | None = None) -> CosetMinima:
    """min{|g| : g in ball(r), pi(g) = gbar} for every image gbar met, with the
    shortlex-least witness."""
    if table is None or table.radius < r:
        table = enumerate_ball(pi.source, r)
    length: dict[str, int] = {}
    witness: dict[str, str] = {}
    for n, sphere in enumerate(table.spheres[: r + 1]):
        for g in sphere:
            gb = push_forward(pi, g)
            if gb not in length:
                length[gb] = n
                witness[gb] = g
    return CosetMinima(r, length, witness)


def quotient_metric_check(pi: Epimorphism, gbar: str, r: int, minima: CosetMinima | None = None) -> MetricCheck:
    gbar = pi.target.reduce(gbar)
    d_bar = word_length(gbar, pi.target)
    if minima is None or minima.radius < r:
        minima = coset_minima(pi, r)
    if gbar not in minima.length:
        return MetricCheck(gbar, d_bar, None, None, "inconclusive")
    d_min = minima.length[gbar]
    return MetricCheck(gbar, d_bar, d_min, minima.witness[gbar], "equal" if d_min == d_bar else "mismatch")


def wordmetric_sweep(pi: Epimorphism, max_dbar: int, r: int) -> list[MetricCheck]:
    """Run the quotient-metric check on every target element with d_bar <= max_dbar."""
    minima = coset_minima(pi, r)
    targets = enumerate_ball(pi.target, max_dbar).elements()
    return [quotient_metric_check(pi, gb, r, minima) for gb in targets]


@dataclass
class MinimalRepSet:
    radius: int
    reps: list[str]
    _set: frozenset = field(default=frozenset(), repr=False)

    def __post_init__(self):
        self._set = frozenset(self.reps)

    def __contains__(self, g: str) -> bool:
        return g in self._set

    def __len__(self) -> int:
        return len(self.reps)

    def __iter__(self):
        return iter(self.reps)


def minimal_reps(pi: Epimorphism, r: int, table: SphereTable | None = None) -> MinimalRepSet:
    """{g in ball(r) : |g| = d_bar(1, pi(g))}, in shortlex order."""
    if r < 0:
        raise ValueError("radius must be >= 0")
    if table is None or table.radius < r:
        table = enumerate_ball(pi.source, r)
    reps = []
    for n, sphere in enumerate(table.spheres[: r + 1]):
        for g in sphere:
            if word_length(push_forward(pi, g), pi.target) == n:
                reps.append(g)
    out = MinimalRepSet(r, reps)
    for g in reps:
        if pi.source.invert(g) not in out:
            raise AssertionError(f"minimal representatives not symmetric at {g!r}")
    return out


@dataclass
class SectionMap:
    radius: int
    rep: dict[str, str]
    waived: list[str]

    def __getitem__(self, gbar: str) -> str:
        return self.rep[gbar]

    def __len__(self) -> int:
        return len(self.rep)

    def __iter__(self):
        return iter(self.rep)


def section(pi: Epimorphism, r: int, reps: MinimalRepSet | None = None) -> SectionMap:
    """A representative iota(gbar) of minimal length for every gbar in the target r-ball.

    Start from the shortlex-least minimal representative; then for each pair
    {gbar, gbar^-1} with gbar != gbar^-1 keep the choice on the shortlex-smaller
    target element and set the partner to its inverse.  Involutive cosets whose
    chosen representative is not an involution are listed in ``waived``.
    """
    if reps is None or reps.radius < r:
        reps = minimal_reps(pi, r)
    tgt = pi.target
    first: dict[str, str] = {}
    for g in reps:
        gb = push_forward(pi, g)
        first.setdefault(gb, g)
    rep: dict[str, str] = {}
    waived: list[str] = []
    for gb in tgt.alphabet.sorted(enumerate_ball(tgt, r).elements()):
        if gb in rep:
            continue
        if gb not in first:
            warnings.warn(f"coset {gb!r} has no minimal representative within radius {r}")
            continue
        g = first[gb]
        rep[gb] = g
        partner = tgt.invert(gb)
        if partner == gb:
            if pi.source.invert(g) != g:
                waived.append(gb)
        else:
            rep[partner] = pi.source.invert(g)
    return SectionMap(r, rep, waived)


def coset_distance(pi: Epimorphism, a: str, a2: str) -> int:
    """d(a Gamma, a2 Gamma) = d_bar(1, pi(a^-1 a2)), Gamma being normal."""
    src = pi.source
    return word_length(push_forward(pi, src.multiply(src.invert(a), a2)), pi.target)
