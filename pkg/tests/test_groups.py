import itertools

import pytest
from hypothesis import given, strategies as st

from floydtight.groups import (
    Alphabet,
    AlphabetError,
    ConfluenceError,
    FreeAbelianGroup,
    FreeGroup,
    Presentation,
    PresentationError,
    load_presentation,
    preset,
)
from floydtight.config import resolve_group

from .oracles import F2_INVERSE, naive_free_reduce, z2_vector
from .strategies import words

F2 = preset("f2")
Z2 = preset("z2")
Z2Z3 = preset("z2z3")


def test_free_reduction_examples():
    assert F2.reduce("aAb") == "b"
    assert F2.reduce("abAB") == "abAB"
    assert F2.multiply("a", "A") == ""
    assert F2.multiply("aB", "abAB") == "aBabAB"
    assert F2.invert("ab") == "BA"
    assert F2.invert("") == ""


def test_z2z3_examples():
    assert Z2Z3.reduce("bb") == "B"
    assert Z2Z3.reduce("aa") == ""
    assert Z2Z3.reduce("bbb") == ""
    assert Z2Z3.geodesic_normal_forms
    assert not Z2Z3.tree_like


def test_z2_examples():
    assert Z2.multiply(Z2.multiply("a", "b"), "a") == "aab"
    assert Z2.invert("aab") == "AAB"
    assert Z2.exponents("aab") == (2, 1)


def test_unknown_letter_rejected():
    with pytest.raises(AlphabetError):
        F2.reduce("abc")
    with pytest.raises(AlphabetError):
        F2.multiply("a", "x")


def test_free_preset_is_tree_like():
    pres = Presentation(Alphabet("aAbB", {"a": "A", "b": "B"}), ())
    g = load_presentation(pres)
    assert g.tree_like and g.geodesic_normal_forms


def test_noncommuting_single_rule_rejected():
    # ab -> ba increases shortlex under a < b, so it cannot terminate-certify
    pres = Presentation(Alphabet("aAbB", {"a": "A", "b": "B"}), (("ab", "ba"),))
    with pytest.raises(PresentationError):
        load_presentation(pres)


def test_single_oriented_commutator_not_confluent():
    pres = Presentation(Alphabet("aAbB", {"a": "A", "b": "B"}), (("ba", "ab"),))
    with pytest.raises(ConfluenceError) as info:
        load_presentation(pres)
    err = info.value
    assert err.left != err.right
    # both sides of the witness come from the overlap word
    g = FreeAbelianGroup(2)
    assert z2_vector(err.overlap) == g.exponents(err.left) == g.exponents(err.right)


def test_length_increasing_rule_rejected():
    pres = Presentation(Alphabet("aA", {"a": "A"}), (("a", "aa"),))
    with pytest.raises(PresentationError):
        load_presentation(pres)


def test_bundled_commuting_presentation_matches_abelian_backend():
    g = resolve_group("z2_commuting")
    for n in range(5):
        for w in itertools.product("aAbB", repeat=n):
            w = "".join(w)
            assert g.reduce(w) == Z2.reduce(w)


def test_presentation_roundtrip():
    pres = Presentation.from_dict({
        "generators": ["a", "b", "B"], "inverses": [["a", "a"], ["b", "B"]], "rules": [["bb", "B"], ["BB", "b"]],
    })
    assert Presentation.from_dict(pres.to_dict()) == pres
    assert load_presentation(pres).reduce("abbab") == Z2Z3.reduce("abbab")


def test_malformed_presentation():
    with pytest.raises(PresentationError):
        Presentation.from_dict({"rules": []})
    with pytest.raises(PresentationError):
        Presentation.from_dict({"generators": ["a"], "inverses": {}, "rules": [["a"]]})


@given(words(F2, 16))
def test_free_reduce_matches_naive_oracle(w):
    assert F2.reduce(w) == naive_free_reduce(w, F2_INVERSE)


@given(words(F2, 12))
def test_free_backend_agrees_with_loaded_presentation(w):
    loaded = resolve_group("f2_free")
    assert loaded.reduce(w) == F2.reduce(w)


@pytest.mark.parametrize("backend", [F2, Z2, Z2Z3, preset("f3")], ids=lambda b: b.name)
def test_idempotent_exhaustive_small(backend):
    for n in range(6):
        for w in itertools.product(backend.letters, repeat=n):
            r = backend.reduce("".join(w))
            assert backend.reduce(r) == r


@pytest.mark.parametrize("backend", [F2, Z2, Z2Z3], ids=lambda b: b.name)
@given(data=st.data())
def test_group_axioms(backend, data):
    u = data.draw(words(backend, 12))
    v = data.draw(words(backend, 12))
    w = data.draw(words(backend, 12))
    ru, rv, rw = backend.reduce(u), backend.reduce(v), backend.reduce(w)
    assert backend.reduce(ru) == ru
    assert backend.reduce(u + v) == backend.multiply(ru, rv)
    assert backend.multiply(backend.multiply(ru, rv), rw) == backend.multiply(ru, backend.multiply(rv, rw))
    assert backend.multiply(ru, backend.invert(ru)) == ""
    assert backend.invert(backend.invert(ru)) == ru


@given(words(Z2, 16))
def test_z2_normal_form_is_exponent_vector(w):
    i, j = z2_vector(w)
    expected = ("a" if i > 0 else "A") * abs(i) + ("b" if j > 0 else "B") * abs(j)
    assert Z2.reduce(w) == expected


@pytest.mark.parametrize("backend", [F2, Z2, Z2Z3], ids=lambda b: b.name)
def test_normal_forms_are_shortlex_least(backend):
    best = {}
    for n in range(6):
        for w in itertools.product(backend.letters, repeat=n):
            w = "".join(w)
            g = backend.reduce(w)
            if g not in best or backend.alphabet.shortlex_less(w, best[g]):
                best[g] = w
    assert all(g == w for g, w in best.items())


def test_alphabet_validation():
    with pytest.raises(AlphabetError):
        Alphabet("aA", {"a": "b"})
    with pytest.raises(AlphabetError):
        Alphabet("ab", {"a": "A"})


def test_presets():
    assert isinstance(preset("f2"), FreeGroup)
    assert preset("trivial").letters == ()
    with pytest.raises(KeyError):
        preset("nope")
