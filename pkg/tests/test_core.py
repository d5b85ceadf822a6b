"""Words, reduction, presentation parsing and symmetrization."""

import io
import random

import pytest

from cancelkit.core import (
    AlphabetError,
    Presentation,
    PresentationSyntaxError,
    RelatorError,
    cyclic_reduce,
    format_presentation,
    free_reduce,
    freely_reduced_words,
    inverse,
    is_cyclically_reduced,
    is_freely_reduced,
    is_proper_power,
    minimal_period,
    parse_presentation,
    random_reduced_word,
    rotations,
    symmetrize,
)


def test_parse_commutator():
    p = parse_presentation("gens: a b\nrel: abAB")
    assert p.generators == ("a", "b")
    assert p.relators == ("abAB",)
    assert p.alphabet == ("a", "A", "b", "B")


def test_parse_two_relators_from_stream():
    p = parse_presentation(io.StringIO("gens: x y z\nrel: xyz\nrel: xzy\n"))
    assert p.relators == ("xyz", "xzy")


def test_parse_ignores_comments_and_blank_lines():
    p = parse_presentation("# torus\n\ngens: a b   # generators\n\nrel: abAB # commutator\n")
    assert p.relators == ("abAB",)


@pytest.mark.parametrize(
    "text, error",
    [
        ("gens: a b\nrel: abBA", RelatorError),
        ("gens: a b\nrel: abA", RelatorError),
        ("gens: a b\nrel: ab", RelatorError),
        ("gens: a b\nrel: abAB\nrel: baBA", RelatorError),
        ("gens: a b", RelatorError),
        ("gens: a b\nrel: abcABC", AlphabetError),
        ("rel: abAB", PresentationSyntaxError),
        ("gens: a b\ngens: a b\nrel: abAB", PresentationSyntaxError),
        ("gens: a b\nrel: ab AB", PresentationSyntaxError),
        ("gens: a b\nrelator: abAB", PresentationSyntaxError),
        ("gens: ab\nrel: abAB", PresentationSyntaxError),
        ("gens: a a\nrel: aaaa", PresentationSyntaxError),
        ("gens: A\nrel: AAA", PresentationSyntaxError),
    ],
)
def test_parse_rejects(text, error):
    with pytest.raises(error):
        parse_presentation(text)


def test_errors_carry_data_error_exit_code():
    with pytest.raises(RelatorError) as info:
        parse_presentation("gens: a b\nrel: abBA")
    assert info.value.exit_code == 65


def test_format_then_parse_is_identity():
    text = "gens: x y z\nrel: xyz\nrel: xzy\n"
    p = parse_presentation(text)
    assert format_presentation(p) == text
    assert parse_presentation(format_presentation(p)) == p


@pytest.mark.parametrize("w, reduced", [("aA", ""), ("abBA", ""), ("aba", "aba"), ("", ""), ("abBcCA", "")])
def test_free_reduce(w, reduced):
    assert free_reduce(w) == reduced


def test_free_reduce_properties():
    rng = random.Random(7)
    for _ in range(300):
        w = "".join(rng.choice("aAbB") for _ in range(rng.randint(0, 12)))
        reduced = free_reduce(w)
        assert is_freely_reduced(reduced)
        assert free_reduce(reduced) == reduced
        assert (len(w) - len(reduced)) % 2 == 0
        assert free_reduce(w + inverse(w)) == ""


@pytest.mark.parametrize(
    "w, core, conjugator", [("Baab", "aa", "B"), ("ab", "ab", ""), ("aBA", "B", "a"), ("", "", "")]
)
def test_cyclic_reduce(w, core, conjugator):
    assert cyclic_reduce(w) == (core, conjugator)


def test_cyclic_reduce_reassembles():
    rng = random.Random(11)
    for _ in range(300):
        w = "".join(rng.choice("aAbB") for _ in range(rng.randint(0, 12)))
        core, conjugator = cyclic_reduce(w)
        assert is_cyclically_reduced(core)
        assert free_reduce(conjugator + core + inverse(conjugator)) == free_reduce(w)


def test_symmetrize_commutator():
    sym = symmetrize(parse_presentation("gens: a b\nrel: abAB"))
    assert set(sym.members) == {"abAB", "bABa", "ABab", "BabA", "baBA", "aBAb", "BAba", "AbaB"}


def test_symmetrize_triangle():
    sym = symmetrize(parse_presentation("gens: a b c\nrel: abc"))
    assert set(sym.members) == {"abc", "bca", "cab", "CBA", "BAC", "ACB"}


def test_symmetrize_proper_power_deduplicates():
    sym = symmetrize(parse_presentation("gens: a\nrel: aaaa"))
    assert sym.members == ("AAAA", "aaaa")


def test_symmetrize_closure_and_index(hexz2):
    sym = symmetrize(hexz2)
    for r in sym.members:
        assert inverse(r) in sym
        assert all(rotation in sym for rotation in rotations(r))
        assert is_cyclically_reduced(r)
        for k in range(1, len(r) + 1):
            assert r in sym.with_prefix(r[:k])
    for prefix, members in sym.prefix_index.items():
        assert all(m.startswith(prefix) for m in members)


def test_symmetrize_ignores_rotation_and_inversion(z2):
    sym = symmetrize(z2)
    for member in sym.members:
        assert set(symmetrize(Presentation(z2.generators, (member,))).members) == set(sym.members)


def test_presentation_rejects_relators_in_one_orbit():
    with pytest.raises(RelatorError):
        Presentation(("a", "b"), ("abAB", "baBA"))
    with pytest.raises(RelatorError):
        Presentation(("a", "b"), ("abAB", "BabA"))


def test_origin_points_back_to_relators(hexz2):
    sym = symmetrize(hexz2)
    for member, (index, rotation, inverted) in sym.origin.items():
        base = inverse(hexz2.relators[index]) if inverted else hexz2.relators[index]
        assert base[rotation:] + base[:rotation] == member


def test_proper_power_matches_naive_check():
    for length in range(1, 7):
        for w in freely_reduced_words(("a", "A", "b", "B"), length):
            naive = any(length % k == 0 and w == w[: length // k] * k for k in range(2, length + 1))
            assert is_proper_power(w) == naive
    assert minimal_period("abab") == 2
    assert minimal_period("aaaa") == 1
    assert minimal_period("abAB") == 4


def test_random_reduced_word_is_reduced():
    rng = random.Random(3)
    for _ in range(100):
        w = random_reduced_word(rng, ("a", "A", "b", "B"), 10)
        assert len(w) == 10
        assert is_freely_reduced(w)


def test_check_word(z2):
    z2.check_word("abAB")
    with pytest.raises(AlphabetError):
        z2.check_word("abc")
