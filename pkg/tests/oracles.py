"""Independent reference computations used to freeze expected values.

None of these call the library's enumeration or metric code; they work from
first principles (naive rewriting, brute-force word enumeration, closed forms).
"""

import itertools
import math


def naive_free_reduce(word: str, inverse: dict) -> str:
    """Delete adjacent inverse pairs until none remain, scanning from the left."""
    w = word
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if inverse[w[i]] == w[i + 1]:
                w = w[:i] + w[i + 2:]
                changed = True
                break
    return w


F2_INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}


def z2_vector(word: str) -> tuple:
    return (word.count("a") - word.count("A"), word.count("b") - word.count("B"))


def brute_sphere_counts(backend, n_max: int) -> list:
    """Evaluate every word of length <= n_max; an element's length is the
    shortest word reaching it."""
    length = {}
    for n in range(n_max + 1):
        for letters in itertools.product(backend.letters, repeat=n):
            g = backend.reduce("".join(letters))
            length.setdefault(g, n)
    counts = [0] * (n_max + 1)
    for v in length.values():
        counts[v] += 1
    return counts


def f2_sphere(n: int) -> int:
    return 1 if n == 0 else 4 * 3 ** (n - 1)


def z2_sphere(n: int) -> int:
    return 1 if n == 0 else 4 * n


def z2_ball(n: int) -> int:
    return 2 * n * n + 2 * n + 1


def poly_floyd(n: int) -> float:
    return 1.0 / (n * n + 1)


def tree_floyd_length(u: str, v: str, f=poly_floyd) -> float:
    """Floyd length of the unique tree geodesic between reduced words u, v.

    The geodesic climbs from u to the longest common prefix c and descends to
    v; the edge between prefixes of length k and k+1 has weight f(k).
    """
    k = 0
    while k < min(len(u), len(v)) and u[k] == v[k]:
        k += 1
    terms = [f(j) for j in range(k, len(u))] + [f(j) for j in range(k, len(v))]
    return math.fsum(terms)
