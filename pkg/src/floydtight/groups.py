"""Group elements as canonical words, and the word-problem backends.

Words are plain ``str`` objects whose characters are single-symbol
generators.  Every backend returns canonical normal words that are
shortlex-least representatives with respect to the alphabet's declared
letter order, so normal forms double as shortlex-least geodesics when
``geodesic_normal_forms`` is set.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

__all__ = [
    "AlphabetError",
    "PresentationError",
    "ConfluenceError",
    "Alphabet",
    "GroupBackend",
    "FreeGroup",
    "FreeAbelianGroup",
    "Presentation",
    "RewritingGroup",
    "load_presentation",
    "read_presentation",
    "reduce",
    "multiply",
    "invert",
    "preset",
    "PRESETS",
]

IDENTITY = ""


class AlphabetError(ValueError):
    """A word contains a letter outside the backend's alphabet."""


class PresentationError(ValueError):
    """A presentation is malformed or has a non-terminating rule."""


class ConfluenceError(PresentationError):
    """Local confluence check failed; carries the critical-pair witness."""

    def __init__(self, overlap: str, left: str, right: str):
        self.overlap = overlap
        self.left = left
        self.right = right
        super().__init__(
            f"critical pair on overlap {overlap!r} resolves to "
            f"{left!r} and {right!r}"
        )


class Alphabet:
    """Ordered symmetric generating set with a letter involution.

    The position of a letter in ``letters`` fixes the shortlex order used for
    every tie-break in the package.
    """

    def __init__(self, letters: Sequence[str], inverse_of: Mapping[str, str]):
        letters = tuple(letters)
        if len(set(letters)) != len(letters):
            raise AlphabetError(f"repeated letters in {letters!r}")
        for x in letters:
            if len(x) != 1:
                raise AlphabetError(f"letters must be single symbols, got {x!r}")
        inv: dict[str, str] = {}
        for x, y in inverse_of.items():
            for z in (x, y):
                if z not in letters:
                    raise AlphabetError(f"inverse pairing uses unknown letter {z!r}")
            if inv.get(x, y) != y or inv.get(y, x) != x:
                raise AlphabetError(f"inconsistent inverse pairing at {x!r}")
            inv[x] = y
            inv[y] = x
        missing = [x for x in letters if x not in inv]
        if missing:
            raise AlphabetError(f"letters without an inverse: {missing!r}")
        self.letters = letters
        self._inv = inv
        self._letterset = frozenset(letters)
        self._rank = {x: i for i, x in enumerate(letters)}
        # map letters to code points in declared order so plain string
        # comparison of translated words is the lexicographic letter order
        self._key_table = str.maketrans({x: chr(0x100 + i) for i, x in enumerate(letters)})
        self._inv_table = str.maketrans(inv)

    def __repr__(self) -> str:
        return f"Alphabet({''.join(self.letters)!r})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Alphabet)
            and self.letters == other.letters
            and self._inv == other._inv
        )

    def __hash__(self) -> int:
        return hash(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __reduce__(self):
        return (Alphabet, (self.letters, self._inv))

    def inv(self, letter: str) -> str:
        return self._inv[letter]

    def formal_inverse(self, word: str) -> str:
        """Reverse ``word`` and invert each letter (no reduction)."""
        return word[::-1].translate(self._inv_table)

    def check(self, word: str) -> None:
        bad = set(word) - self._letterset
        if bad:
            raise AlphabetError(
                f"letters {sorted(bad)!r} not in alphabet {''.join(self.letters)!r}"
            )

    def lex_key(self, word: str) -> str:
        return word.translate(self._key_table)

    def shortlex_key(self, word: str) -> tuple[int, str]:
        return (len(word), word.translate(self._key_table))

    def shortlex_less(self, u: str, v: str) -> bool:
        return self.shortlex_key(u) < self.shortlex_key(v)

    def sorted(self, words: Iterable[str]) -> list[str]:
        return sorted(words, key=self.shortlex_key)


class GroupBackend:
    """Word-problem contract consumed by every other module.

    Subclasses implement :meth:`_normalize` on alphabet-checked words and may
    override :meth:`step` with a fast right multiplication by one letter.
    Backends are immutable after construction.
    """

    name: str = "group"
    geodesic_normal_forms: bool = True
    tree_like: bool = False
    torsion_free: bool = False

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} on {''.join(self.alphabet.letters)!r}>"

    @property
    def letters(self) -> tuple[str, ...]:
        return self.alphabet.letters

    def _normalize(self, word: str) -> str:
        raise NotImplementedError

    def reduce(self, word: str) -> str:
        self.alphabet.check(word)
        return self._normalize(word)

    def step(self, g: str, letter: str) -> str:
        """Right-multiply the normal word ``g`` by a single generator."""
        return self._normalize(g + letter)

    def multiply(self, u: str, v: str) -> str:
        self.alphabet.check(u)
        self.alphabet.check(v)
        return self._normalize(u + v)

    def invert(self, u: str) -> str:
        return self._normalize(self.alphabet.formal_inverse(u))

    def power(self, g: str, n: int) -> str:
        if n < 0:
            g, n = self.invert(g), -n
        return self.reduce(g * n)

    def is_identity(self, g: str) -> bool:
        return self.reduce(g) == IDENTITY


def _free_alphabet(rank: int) -> Alphabet:
    if rank > 26:
        raise ValueError("free presets support rank <= 26")
    letters = []
    inverse = {}
    for i in range(rank):
        x = chr(ord("a") + i)
        letters += [x, x.upper()]
        inverse[x] = x.upper()
    return Alphabet(letters, inverse)


class FreeGroup(GroupBackend):
    """Free group; normal forms are freely reduced words.

    Involutive letters (``inverse_of[x] == x``) are allowed, which turns the
    backend into a free product of copies of Z and Z/2; the Cayley graph stays
    a tree.
    """

    tree_like = True

    def __init__(self, rank: int | None = None, alphabet: Alphabet | None = None, name: str | None = None):
        if alphabet is None:
            alphabet = _free_alphabet(rank or 0)
        super().__init__(alphabet)
        self.torsion_free = all(alphabet.inv(x) != x for x in alphabet.letters)
        self.name = name or f"F{len(alphabet.letters) // 2}"
        self._inv = {x: alphabet.inv(x) for x in alphabet.letters}

    def __reduce__(self):
        return (FreeGroup, (None, self.alphabet, self.name))

    def _normalize(self, word: str) -> str:
        inv = self._inv
        out: list[str] = []
        for x in word:
            if out and out[-1] == inv[x]:
                out.pop()
            else:
                out.append(x)
        return "".join(out)

    def step(self, g: str, letter: str) -> str:
        if g and g[-1] == self._inv[letter]:
            return g[:-1]
        return g + letter

    def multiply(self, u: str, v: str) -> str:
        self.alphabet.check(u)
        self.alphabet.check(v)
        # both inputs reduced: cancellation only happens at the junction
        inv = self._inv
        i = 0
        m = min(len(u), len(v))
        while i < m and u[-1 - i] == inv[v[i]]:
            i += 1
        return u[: len(u) - i] + v[i:]

    def invert(self, u: str) -> str:
        return self.alphabet.formal_inverse(u)


class FreeAbelianGroup(GroupBackend):
    """Z^k with generators a, b, c, ... and normal forms a^i b^j c^k.

    Blocks appear in generator order, which is the shortlex-least spelling
    under the alphabet order a, A, b, B, ...
    """

    torsion_free = True

    def __init__(self, rank: int, name: str | None = None):
        super().__init__(_free_alphabet(rank))
        self.rank = rank
        self.name = name or f"Z{rank}"
        self._gens = [chr(ord("a") + i) for i in range(rank)]
        self._coord = {}
        for i, x in enumerate(self._gens):
            self._coord[x] = (i, 1)
            self._coord[x.upper()] = (i, -1)

    def __reduce__(self):
        return (FreeAbelianGroup, (self.rank, self.name))

    def exponents(self, word: str) -> tuple[int, ...]:
        e = [0] * self.rank
        for x in word:
            i, s = self._coord[x]
            e[i] += s
        return tuple(e)

    def from_exponents(self, e: Sequence[int]) -> str:
        parts = []
        for x, k in zip(self._gens, e):
            parts.append(x * k if k >= 0 else x.upper() * (-k))
        return "".join(parts)

    def _normalize(self, word: str) -> str:
        return self.from_exponents(self.exponents(word))

    def step(self, g: str, letter: str) -> str:
        # cheap path: insert/cancel within the letter's block
        i, s = self._coord[letter]
        e = list(self.exponents(g))
        e[i] += s
        return self.from_exponents(e)

    def invert(self, u: str) -> str:
        return self.from_exponents([-k for k in self.exponents(u)])


@dataclass(frozen=True)
class Presentation:
    """Rewriting presentation: alphabet plus user rules ``lhs -> rhs``.

    Free cancellation ``x x^-1 -> ""`` is always added by :func:`load_presentation`.
    """

    alphabet: Alphabet
    rules: tuple[tuple[str, str], ...] = ()
    name: str = "presentation"

    @classmethod
    def from_dict(cls, data: Mapping, name: str | None = None) -> "Presentation":
        try:
            gens = list(data["generators"])
            inverses = data.get("inverses", {})
            rules = data.get("rules", [])
        except (KeyError, TypeError) as exc:
            raise PresentationError(f"malformed presentation: {exc}") from exc
        if isinstance(inverses, Mapping):
            pairing = dict(inverses)
        else:
            pairing = {}
            for pair in inverses:
                if len(pair) != 2:
                    raise PresentationError(f"inverse pair must have two letters: {pair!r}")
                pairing[pair[0]] = pair[1]
        try:
            alphabet = Alphabet(gens, pairing)
        except AlphabetError as exc:
            raise PresentationError(str(exc)) from exc
        parsed = []
        for rule in rules:
            if len(rule) != 2:
                raise PresentationError(f"rule must be [lhs, rhs]: {rule!r}")
            parsed.append((str(rule[0]), str(rule[1])))
        return cls(alphabet, tuple(parsed), name or data.get("name", "presentation"))

    def to_dict(self) -> dict:
        inv = {}
        for x in self.alphabet.letters:
            y = self.alphabet.inv(x)
            if y not in inv:
                inv[x] = y
        return {
            "name": self.name,
            "generators": list(self.alphabet.letters),
            "inverses": inv,
            "rules": [list(r) for r in self.rules],
        }


class RewritingGroup(GroupBackend):
    """Group given by a terminating, locally confluent rewriting system.

    Reduction keeps an irreducible output stack and re-feeds right-hand sides,
    so every rule match ends at the newest letter; among simultaneous matches
    the longest left-hand side (leftmost start) wins.
    """

    def __init__(self, presentation: Presentation, rules: Sequence[tuple[str, str]], tree_like: bool):
        super().__init__(presentation.alphabet)
        self.presentation = presentation
        self.name = presentation.name
        self.rules = tuple(rules)
        self.tree_like = tree_like
        self.torsion_free = False
        by_last: dict[str, list[tuple[str, str]]] = {}
        for lhs, rhs in self.rules:
            by_last.setdefault(lhs[-1], []).append((lhs, rhs))
        for v in by_last.values():
            v.sort(key=lambda r: -len(r[0]))
        self._by_last = by_last

    def __reduce__(self):
        return (RewritingGroup, (self.presentation, self.rules, self.tree_like))

    def _rewrite(self, out: list[str], pending: list[str]) -> str:
        by_last = self._by_last
        while pending:
            x = pending.pop()
            out.append(x)
            for lhs, rhs in by_last.get(x, ()):
                n = len(lhs)
                if len(out) >= n and "".join(out[-n:]) == lhs:
                    del out[-n:]
                    pending.extend(reversed(rhs))
                    break
        return "".join(out)

    def _normalize(self, word: str) -> str:
        return self._rewrite([], list(reversed(word)))

    def step(self, g: str, letter: str) -> str:
        return self._rewrite(list(g), [letter])


def _cancellation_rules(alphabet: Alphabet) -> list[tuple[str, str]]:
    return [(x + alphabet.inv(x), "") for x in alphabet.letters]


def _critical_pairs(rules: Sequence[tuple[str, str]]):
    """Yield (overlap word, one-step result A, one-step result B)."""
    for l1, r1 in rules:
        for l2, r2 in rules:
            # suffix of l1 overlaps prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    yield l1 + l2[k:], r1 + l2[k:], l1[:-k] + r2
            # l2 strictly inside l1 (or equal with a different rule)
            if (l1, r1) != (l2, r2):
                start = l1.find(l2)
                while start != -1:
                    yield l1, r1, l1[:start] + r2 + l1[start + len(l2):]
                    start = l1.find(l2, start + 1)


def load_presentation(source: Presentation) -> RewritingGroup:
    """Validate a presentation and return a backend for it.

    Rules must be length-non-increasing, and length-preserving rules must be
    strictly shortlex-decreasing, which guarantees termination.  All critical
    pairs (overlaps of width at most twice the longest rule) must resolve.
    Local confluence plus termination makes normal forms unique and, being
    shortlex-minimal, geodesic.
    """
    alphabet = source.alphabet
    user = []
    for lhs, rhs in source.rules:
        if not lhs:
            raise PresentationError("empty left-hand side")
        try:
            alphabet.check(lhs)
            alphabet.check(rhs)
        except AlphabetError as exc:
            raise PresentationError(str(exc)) from exc
        if not alphabet.shortlex_less(rhs, lhs):
            raise PresentationError(
                f"rule {lhs!r} -> {rhs!r} is not shortlex-decreasing (non-terminating)"
            )
        user.append((lhs, rhs))
    cancel = _cancellation_rules(alphabet)
    rules = list(dict.fromkeys(cancel + user))
    backend = RewritingGroup(source, rules, tree_like=set(rules) <= set(cancel))
    for overlap, a, b in _critical_pairs(rules):
        ra, rb = backend._normalize(a), backend._normalize(b)
        if ra != rb:
            raise ConfluenceError(overlap, ra, rb)
    return backend


def read_presentation(path: str | Path) -> RewritingGroup:
    path = Path(path)
    with path.open() as fh:
        data = json.load(fh)
    return load_presentation(Presentation.from_dict(data, name=data.get("name", path.stem)))


def reduce(word: str, backend: GroupBackend) -> str:
    return backend.reduce(word)


def multiply(u: str, v: str, backend: GroupBackend) -> str:
    return backend.multiply(u, v)


def invert(u: str, backend: GroupBackend) -> str:
    return backend.invert(u)


Z2Z3_PRESENTATION = Presentation(
    Alphabet("abB", {"a": "a", "b": "B"}),
    (("bb", "B"), ("BB", "b")),
    name="z2z3",
)


def _z2z3() -> RewritingGroup:
    return load_presentation(Z2Z3_PRESENTATION)


PRESETS = {
    "trivial": lambda: FreeGroup(0, name="trivial"),
    "z": lambda: FreeGroup(1, name="Z"),
    "f2": lambda: FreeGroup(2, name="F2"),
    "f3": lambda: FreeGroup(3, name="F3"),
    "z2": lambda: FreeAbelianGroup(2, name="Z2"),
    "z3": lambda: FreeAbelianGroup(3, name="Z3"),
    "z2z3": _z2z3,
}


def preset(name: str) -> GroupBackend:
    try:
        return PRESETS[name.lower()]()
    except KeyError:
        raise KeyError(f"unknown group preset {name!r}; choose from {sorted(PRESETS)}") from None
