import pytest
from hypothesis import given

from floydtight.cayley import enumerate_ball, word_length
from floydtight.groups import Alphabet, Presentation, load_presentation, preset
from floydtight.quotient import (
    Epimorphism,
    EpimorphismError,
    coset_distance,
    minimal_reps,
    push_forward,
    quotient_metric_check,
    section,
    wordmetric_sweep,
)

from .oracles import z2_vector
from .strategies import elements, words

F2, Z2 = preset("f2"), preset("z2")
Z_MOD_2 = load_presentation(Presentation(Alphabet("a", {"a": "a"}), (), name="Z/2"))
IDENTITY_MAP = {"a": "a", "A": "A", "b": "b", "B": "B"}


def test_push_forward_examples(f2_to_z2):
    assert push_forward(f2_to_z2, "abAB") == ""
    assert push_forward(f2_to_z2, "aB") == "aB"
    assert push_forward(f2_to_z2, "") == ""
    assert f2_to_z2.in_kernel("abAB") and not f2_to_z2.in_kernel("ab")


def test_epimorphism_validation():
    with pytest.raises(EpimorphismError):
        Epimorphism(F2, Z2, {"a": "a", "A": "A", "b": "b"})
    with pytest.raises(EpimorphismError):
        Epimorphism(F2, Z2, {"a": "a", "A": "A", "b": "", "B": ""})
    with pytest.raises(EpimorphismError):
        Epimorphism(F2, Z2, {"a": "a", "A": "a", "b": "b", "B": "B"})
    with pytest.raises(EpimorphismError):
        Epimorphism(F2, Z2, {"a": "ab", "A": "BA", "b": "b", "B": "B"})


@given(words(F2, 12), words(F2, 12))
def test_homomorphism(f2_to_z2, u, v):
    pi = f2_to_z2
    assert pi(u + v) == Z2.multiply(pi(u), pi(v))
    assert z2_vector(pi(u)) == z2_vector(u)


def test_metric_check_examples(f2_to_z2):
    c = quotient_metric_check(f2_to_z2, "aa", 4)
    assert (c.d_bar, c.d_min, c.witness, c.status) == (2, 2, "aa", "equal")
    c = quotient_metric_check(f2_to_z2, "", 4)
    assert (c.d_bar, c.d_min) == (0, 0)
    c = quotient_metric_check(f2_to_z2, "ab", 4)
    assert (c.d_bar, c.d_min, c.witness) == (2, 2, "ab")
    assert quotient_metric_check(f2_to_z2, "aaaaa", 4).status == "inconclusive"


def test_wordmetric_sweep_small(f2_to_z2):
    checks = wordmetric_sweep(f2_to_z2, 3, 6)
    assert len(checks) == 25 and all(c.ok for c in checks)


def test_minimal_reps_examples(f2_to_z2):
    reps = minimal_reps(f2_to_z2, 2)
    assert "a" in reps and "abAB" not in reps
    assert minimal_reps(f2_to_z2, 0).reps == [""]
    ident = Epimorphism(F2, F2, IDENTITY_MAP)
    assert minimal_reps(ident, 4).reps == enumerate_ball(F2, 4).elements()


def test_minimal_reps_closed_form(f2_to_z2):
    # a word is minimal iff it never uses both a and A, nor both b and B
    reps = set(minimal_reps(f2_to_z2, 6))
    expected = {
        g for g in enumerate_ball(F2, 6).elements()
        if not ("a" in g and "A" in g) and not ("b" in g and "B" in g)
    }
    assert reps == expected


def test_section(f2_to_z2):
    sec = section(f2_to_z2, 4)
    assert sec["a"] == "a" and sec["A"] == "A"
    for gb in sec:
        g = sec[gb]
        assert push_forward(f2_to_z2, g) == gb
        assert word_length(g, F2) == word_length(gb, Z2)
        assert sec[Z2.invert(gb)] == F2.invert(g)
    assert not sec.waived


def test_section_waives_involutive_coset():
    pi = Epimorphism(F2, Z_MOD_2, {"a": "a", "A": "a", "b": "", "B": ""})
    sec = section(pi, 2)
    assert sec["a"] == "a" and sec.waived == ["a"]


def test_coset_distance_examples(f2_to_z2):
    assert coset_distance(f2_to_z2, "a", "b") == 2
    assert coset_distance(f2_to_z2, "a", "aabAB") == 0
    assert coset_distance(f2_to_z2, "", "aaa") == 3


@given(elements(F2, 8), elements(F2, 8), elements(F2, 8))
def test_coset_distance_is_pseudometric(f2_to_z2, x, y, z):
    d = lambda u, v: coset_distance(f2_to_z2, u, v)
    assert d(x, y) == d(y, x)
    assert d(x, z) <= d(x, y) + d(y, z)
    assert d(x, y) <= word_length(F2.multiply(F2.invert(x), y), F2)


def test_killing_b(f2_to_z):
    reps = minimal_reps(f2_to_z, 5)
    assert reps.reps == ["", "a", "A", "aa", "AA", "aaa", "AAA", "aaaa", "AAAA", "aaaaa", "AAAAA"]


def test_identity_map_detection(f2_to_z2):
    assert Epimorphism(F2, F2, IDENTITY_MAP).is_identity_map()
    # same alphabet, different group
    assert not f2_to_z2.is_identity_map()
