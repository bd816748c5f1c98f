"""Free-product sets W(A, h^n), injectivity of the evaluation map, and the
critical-gap certificate that separates delta_G from delta_{G/Gamma}.

The existential constants of the argument (net scale L, power threshold N)
are replaced by their testable consequences: the power n is doubled until an
exhaustive collision scan of kappa succeeds, and L is a configured or
conservative default.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from ._parallel import chunk, map_shards
from .cayley import enumerate_ball, geodesic_path, geodesic_word, word_length
from .contracting import (
    AdmissiblePath,
    Segment,
    axis_of,
    diameter,
    project_set,
    validate_admissible,
)
from .groups import GroupBackend
from .growth import CriticalBracket, critical_bracket
from .quotient import Epimorphism, MinimalRepSet, minimal_reps, push_forward

__all__ = [
    "ExperimentRefused",
    "FreeProductWord",
    "Net",
    "InjectivityResult",
    "GapCertificate",
    "TightnessConfig",
    "TightnessReport",
    "build_net",
    "enumerate_free_words",
    "count_free_words",
    "evaluate_kappa",
    "injectivity_test",
    "orthogonality_check",
    "normal_path",
    "gap_value",
    "gap_certificate",
    "tightness_experiment",
]


class ExperimentRefused(ValueError):
    """The configuration violates a hypothesis the experiment depends on."""


@dataclass(frozen=True)
class FreeProductWord:
    """a_1 h^n a_2 h^n ... a_k h^n, always led by an A-syllable."""

    syllables: tuple[str, ...]
    h: str
    n: int

    def __post_init__(self):
        if not self.syllables:
            raise ValueError("a free-product word needs k >= 1 syllables")

    @property
    def k(self) -> int:
        return len(self.syllables)

    def letters(self, backend: GroupBackend) -> str:
        hn = backend.power(self.h, self.n)
        return "".join(a + hn for a in self.syllables)

    def __str__(self) -> str:
        hn = f"({self.h})^{self.n}"
        return " ".join(f"{a or '1'} {hn}" for a in self.syllables)


@dataclass
class Net:
    A: list[str]
    L: float

    def __len__(self) -> int:
        return len(self.A)

    def __iter__(self):
        return iter(self.A)


def build_net(reps: MinimalRepSet | Sequence[str], pi: Epimorphism, L: float) -> Net:
    """Greedy L-separated net, scanning representatives in shortlex order.

    A representative is accepted iff its coset distance to every accepted one
    exceeds L, so each rejected representative lies within L of the net.
    """
    if L < 0:
        raise ValueError("L must be >= 0")
    src = pi.source
    ordered = src.alphabet.sorted(reps)
    accepted: list[str] = []
    images: list[str] = []
    tgt = pi.target
    for g in ordered:
        gb = push_forward(pi, g)
        # d(a Gamma, g Gamma) = |pi(a)^-1 pi(g)|
        if all(word_length(tgt.multiply(tgt.invert(ab), gb), tgt) > L for ab in images):
            accepted.append(g)
            images.append(gb)
    return Net(accepted, L)


def count_free_words(size: int, k_max: int) -> int:
    return sum(size ** k for k in range(1, k_max + 1))


def _check_syllables(A: Sequence[str], h: str, n: int, backend: GroupBackend) -> None:
    h = backend.reduce(h)
    if not h:
        raise ValueError("h must be nontrivial")
    if n < 1:
        raise ValueError("n must be >= 1")
    powers = {backend.power(h, m) for m in range(-n, n + 1) if m}
    bad = [a for a in A if a in powers]
    if bad:
        raise ValueError(f"net contains powers of h: {bad!r}")


def enumerate_free_words(A: Net | Sequence[str], h: str, n: int, k_max: int,
                         backend: GroupBackend | None = None) -> Iterator[FreeProductWord]:
    """All words with 1..k_max A-syllables, ordered by k then syllable indices."""
    A = list(A)
    if backend is not None:
        _check_syllables(A, h, n, backend)
    elif h in A:
        raise ValueError("h must not belong to A")
    if n < 1:
        raise ValueError("n must be >= 1")
    for k in range(1, k_max + 1):
        for idx in itertools.product(range(len(A)), repeat=k):
            yield FreeProductWord(tuple(A[i] for i in idx), h, n)


def evaluate_kappa(w: FreeProductWord, backend: GroupBackend) -> str:
    return backend.reduce(w.letters(backend))


@dataclass
class InjectivityResult:
    injective: bool
    complete: bool
    words_checked: int
    words_total: int
    k_checked: int
    collisions: list[tuple[tuple[int, ...], tuple[int, ...], str]] = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return self.injective and self.complete

    def to_dict(self, A: Sequence[str] | None = None) -> dict:
        def show(idx):
            return [A[i] for i in idx] if A is not None else list(idx)

        return {
            "injective": self.injective,
            "complete": self.complete,
            "words_checked": self.words_checked,
            "words_total": self.words_total,
            "k_checked": self.k_checked,
            "collisions": [
                {"word": show(a), "other": show(b), "image": img} for a, b, img in self.collisions[:20]
            ],
            "collision_count": len(self.collisions),
        }


def _level_images(leads: Sequence[int], A: Sequence[str], hn: str, k_max: int,
                  backend: GroupBackend) -> list[list[str]]:
    """Images of all words whose first syllable index is in ``leads``, per k.

    Within a level the order is lexicographic in syllable indices, matching
    the global enumeration restricted to these leading syllables.
    """
    mul = backend.multiply
    step_imgs = [mul(a, hn) for a in A]
    levels: list[list[str]] = []
    current = [step_imgs[i] for i in leads]
    levels.append(current)
    for _ in range(2, k_max + 1):
        current = [mul(p, s) for p in current for s in step_imgs]
        levels.append(current)
    return levels


def _decode(flat: int, k: int, size: int) -> tuple[int, ...]:
    digits = []
    for _ in range(k):
        flat, d = divmod(flat, size)
        digits.append(d)
    return tuple(reversed(digits))


def injectivity_test(A: Net | Sequence[str], h: str, n: int, k_max: int, backend: GroupBackend, *,
                     max_words: int = 4_000_000, workers: int = 1) -> InjectivityResult:
    """Exhaustive collision scan of kappa over W(A, h^n) with k <= k_max.

    Levels k are scanned whole while the running count fits ``max_words``;
    a truncated scan yields ``complete=False``.  Work is sharded by leading
    syllable and merged in enumeration order, so results are identical for
    any worker count.
    """
    A = list(A)
    _check_syllables(A, h, n, backend)
    size = len(A)
    total = count_free_words(size, k_max)
    k_fit = 0
    running = 0
    for k in range(1, k_max + 1):
        if running + size ** k > max_words:
            break
        running += size ** k
        k_fit = k
    if k_fit == 0 or size == 0:
        return InjectivityResult(size == 0, k_fit == k_max, 0, total, 0)
    hn = backend.power(h, n)
    shards = [list(c) for c in chunk(range(size), workers)]
    parts = map_shards(_level_images, shards, workers, A, hn, k_fit, backend)
    seen: dict[str, int] = {}
    collisions = []
    for k in range(1, k_fit + 1):
        block = size ** (k - 1)
        for shard, levels in zip(shards, parts):
            # flat index within level k of the first word led by shard[0]
            offset = shard[0] * block
            code_base = sum(size ** j for j in range(1, k))
            for j, img in enumerate(levels[k - 1]):
                code = code_base + offset + j
                prev = seen.get(img)
                if prev is None:
                    seen[img] = code
                else:
                    collisions.append((prev, code, img))
    del parts

    def unpack(code: int) -> tuple[int, ...]:
        k = 1
        while code >= size ** k:
            code -= size ** k
            k += 1
        return _decode(code, k, size)

    coll = [(unpack(a), unpack(b), img) for a, b, img in collisions]
    return InjectivityResult(not coll, k_fit == k_max, running, total, k_fit, coll)


def orthogonality_check(g: str, h: str, pi: Epimorphism, R: int | None = None) -> float:
    """diam proj_{axis(h)}([1, g]) for a minimal representative g."""
    src = pi.source
    if not src.tree_like:
        raise NotImplementedError("orthogonality needs an axis, available on tree-like backends")
    g = src.reduce(g)
    if word_length(g, src) != word_length(push_forward(pi, g), pi.target):
        raise ValueError(f"{g!r} is not a minimal representative")
    if not g:
        return 0
    R = len(g) + 1 if R is None else R
    X = axis_of(h, src, R).subset
    return diameter(project_set(X, geodesic_path("", g, src), src), src)


def normal_path(w: FreeProductWord, backend: GroupBackend, axis_radius: int | None = None) -> AdmissiblePath:
    """p_1 q_1 ... p_k q_k with p_i labelled a_i and q_i labelled h^n.

    q_i is anchored to (a_1 h^n ... a_i) . axis(h); ``h`` should be cyclically
    reduced so that the axis passes through the identity.  The returned path
    has D = |h^n| - 1 and tau set to the measured orthogonality.
    """
    hn = geodesic_word(backend.power(w.h, w.n), backend)
    if axis_radius is None:
        axis_radius = len(hn) + max(len(a) for a in w.syllables) + 2
    base = axis_of(w.h, backend, axis_radius).subset
    segments = []
    cur = ""
    for a in w.syllables:
        label = geodesic_word(a, backend)
        segments.append(Segment(cur, label))
        cur = backend.multiply(cur, a)
        segments.append(Segment(cur, hn, base.translate(cur, backend)))
        cur = backend.multiply(cur, hn)
    path = AdmissiblePath(segments, D=len(hn) - 1, tau=math.inf, meta={"word": str(w)})
    verdict = validate_admissible(path, backend)
    path.tau = verdict.tau_observed
    path.meta["verdict"] = verdict
    return path


@dataclass(frozen=True)
class GapCertificate:
    s: float
    value: float
    certified: bool
    injective: bool

    @property
    def implied_lower_bound(self) -> float | None:
        return self.s if self.certified else None

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "value": self.value,
            "certified": self.certified,
            "injective": self.injective,
            "implied_delta_lower_bound": self.implied_lower_bound,
        }


def gap_value(A: Sequence[str], h: str, n: int, s: float, backend: GroupBackend) -> float:
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    hn = backend.power(h, n)
    return math.fsum(math.exp(-s * word_length(backend.multiply(a, hn), backend)) for a in A)


def gap_certificate(A: Net | Sequence[str], h: str, n: int, s: float, backend: GroupBackend, *,
                    injective: bool | InjectivityResult | None = None, k_max: int = 3) -> GapCertificate:
    """value = sum_{a in A} exp(-s |a h^n|); certified iff value > 1 and kappa injective.

    A certified value makes the series over A*h^n dominate sum_k value^k, so it
    diverges at s and delta_G >= s.
    """
    A = list(A)
    value = gap_value(A, h, n, s, backend)
    if injective is None:
        injective = injectivity_test(A, h, n, k_max, backend)
    if isinstance(injective, InjectivityResult):
        injective = injective.verdict
    return GapCertificate(s, value, bool(value > 1 and injective), bool(injective))


@dataclass
class TightnessConfig:
    pi: Epimorphism
    h: str
    rep_radius: int = 8
    k_max: int = 3
    n_schedule: tuple[int, ...] = (1, 2, 4, 8)
    L: float | None = None
    s_grid: tuple[float, ...] = (0.1, 0.2, 0.25, 0.3, 0.35, 0.4, 0.5)
    growth_radius_source: int = 12
    growth_radius_target: int = 40
    assume_infinite_kernel: bool = False
    max_words: int = 4_000_000
    seed: int = 0
    workers: int = 1
    name: str = "experiment"


@dataclass
class TightnessReport:
    name: str
    h: str
    n: int | None
    L: float | None
    tau_max: float | None
    net: list[str]
    injectivity: InjectivityResult | None
    attempts: list[dict]
    certificates: list[GapCertificate]
    delta_G: CriticalBracket
    delta_Gbar: CriticalBracket
    chain: list[str]
    seed: int

    @property
    def gap_lower_bound(self) -> float | None:
        certified = [c.s for c in self.certificates if c.certified]
        return max(certified) if certified else None

    @property
    def delta_gap(self) -> float:
        return self.delta_G.hi_certified - self.delta_Gbar.lo_heuristic

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "h": self.h,
            "n": self.n,
            "L": self.L,
            "tau_max": self.tau_max,
            "net_size": len(self.net),
            "net": self.net,
            "injectivity": self.injectivity.to_dict(self.net) if self.injectivity else None,
            "attempts": self.attempts,
            "certificates": [c.to_dict() for c in self.certificates],
            "gap_lower_bound": self.gap_lower_bound,
            "delta_G": self.delta_G.to_dict(),
            "delta_Gbar": self.delta_Gbar.to_dict(),
            "delta_G_hi_minus_delta_Gbar_ratio": self.delta_gap,
            "lemma_chain": self.chain,
            "seed": self.seed,
        }

    def certificates_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "value", "certified"])
        for c in self.certificates:
            w.writerow([repr(c.s), repr(c.value), int(c.certified)])
        return buf.getvalue()


def _check_hypotheses(cfg: TightnessConfig) -> str:
    pi = cfg.pi
    if pi.is_identity_map():
        raise ExperimentRefused("the epimorphism is the identity, so the kernel is trivial")
    h = pi.source.reduce(cfg.h)
    if not h:
        raise ExperimentRefused("h must be a nontrivial element")
    if not pi.in_kernel(h):
        raise ExperimentRefused(f"h = {h!r} is not in the kernel (pi(h) = {pi(h)!r})")
    if not (pi.source.torsion_free or cfg.assume_infinite_kernel):
        raise ExperimentRefused(
            "cannot establish an infinite kernel: source may have torsion; "
            "set assume_infinite_kernel to record it as a hypothesis"
        )
    return h


def tightness_experiment(cfg: TightnessConfig) -> TightnessReport:
    """minimal reps -> net -> injectivity (doubling n) -> gap sweep -> growth brackets."""
    pi = cfg.pi
    src = pi.source
    h = _check_hypotheses(cfg)
    table = enumerate_ball(src, cfg.rep_radius, workers=cfg.workers)
    reps = minimal_reps(pi, cfg.rep_radius, table)
    tau_max = None
    if src.tree_like:
        tau_max = max(orthogonality_check(g, h, pi) for g in reps)
    attempts = []
    chosen = None
    for n in cfg.n_schedule:
        hn_len = word_length(src.power(h, n), src)
        if cfg.L is not None:
            L = cfg.L
        elif tau_max is not None:
            L = tau_max + 2 * hn_len
        else:
            L = 2 * hn_len
        net = build_net(reps, pi, L)
        inj = injectivity_test(net.A, h, n, cfg.k_max, src, max_words=cfg.max_words, workers=cfg.workers)
        attempts.append({
            "n": n, "L": L, "net_size": len(net), "injective": inj.injective,
            "complete": inj.complete, "collision_count": len(inj.collisions),
        })
        if inj.verdict:
            chosen = (n, L, net, inj)
            break
    if chosen is None:
        n, L, net, inj = None, None, Net([], 0), None
        certs = []
    else:
        n, L, net, inj = chosen
        certs = [gap_certificate(net.A, h, n, s, src, injective=inj) for s in cfg.s_grid]
    dG = critical_bracket(enumerate_ball(src, cfg.growth_radius_source, workers=cfg.workers, lookahead=True))
    dGbar = critical_bracket(enumerate_ball(pi.target, cfg.growth_radius_target, workers=cfg.workers,
                                            lookahead=True))
    chain = [
        "minimal representatives realise the quotient metric",
        "net covers the truncated representative set at scale L",
        "kappa injective on W(A, h^n) up to k_max (exhaustive scan)",
        "gap value > 1 at s implies divergence of the A*h^n series at s",
        "divergence of the net series at its exponent is inherited, not certified",
    ]
    return TightnessReport(cfg.name, h, n, L, tau_max, list(net.A), inj, attempts, certs, dG, dGbar, chain,
                           cfg.seed)
