"""Class representatives, translation numbers, roots and power conjugacy."""

from fractions import Fraction

import pytest

from cancelkit.config import Bounds
from cancelkit.conjtrans import (
    Answer,
    GroupContext,
    HalfInteger,
    NoReason,
    conjugacy,
    count_classes_by_tau,
    is_torsion_free_upto,
    max_root,
    nth_root,
    periodic_square,
    power_conjugacy,
    power_length,
    shortest_class_rep,
    translation_number,
    wall_fires,
)
from cancelkit.core import (
    AlphabetError,
    IdentityInput,
    InvalidArgument,
    UnsupportedPresentation,
    inverse,
    parse_presentation,
)
from cancelkit.oracle import oracle_distance


def conjugate_of(w, h):
    return inverse(h) + w + h


@pytest.mark.parametrize("text, twice", [("2", 4), ("3/2", 3), ("1.5", 3), ("0", 0)])
def test_half_integer_parse(text, twice):
    assert HalfInteger.parse(text).twice == twice


@pytest.mark.parametrize("text", ["1/3", "x", "-1"])
def test_half_integer_rejects(text):
    with pytest.raises(InvalidArgument):
        HalfInteger.parse(text)


def test_half_integer_value():
    tau = HalfInteger(3)
    assert tau.value == Fraction(3, 2)
    assert str(tau) == "3/2"
    assert tau.to_dict() == {"twice": 3}
    assert HalfInteger(2) < HalfInteger(3)


def test_context_rejects_unclassified(a4):
    with pytest.raises(UnsupportedPresentation):
        GroupContext(a4)


@pytest.mark.parametrize(
    "ctx_name, w, rep, length",
    [("z2_ctx", "baB", "a", 1), ("klein_ctx", "Bab", "A", 1), ("z2_ctx", "ab", "ab", 2), ("z2_ctx", "abAB", "", 0)],
)
def test_shortest_class_rep(request, ctx_name, w, rep, length):
    ctx = request.getfixturevalue(ctx_name)
    result = shortest_class_rep(w, ctx)
    assert result.rep == rep
    assert result.length == length
    assert result.certified
    assert ctx.equal(conjugate_of(w, result.conjugator), result.rep)


def test_class_rep_of_a_long_power_is_certified(z2_ctx):
    w = "abab" * 4
    result = shortest_class_rep(w, z2_ctx)
    assert result.certified
    assert result.length == 16
    # every spelling of a^8 b^8 is one element of a one element class
    assert len(result.orbit) == 1
    assert z2_ctx.equal(conjugate_of(w, result.conjugator), result.rep)


def test_class_rep_rejects_foreign_letters(z2_ctx):
    with pytest.raises(AlphabetError):
        shortest_class_rep("abc", z2_ctx)


def test_class_rep_dict(klein_ctx):
    data = shortest_class_rep("Bab", klein_ctx).to_dict()
    assert data["rep"] == "A"
    assert data["certified"] is True
    assert data["trail"][0].startswith("settle")


@pytest.mark.parametrize(
    "ctx_name, w1, w2, verdict",
    [
        ("z2_ctx", "ab", "ba", Answer.YES),
        ("z2_ctx", "ab", "aB", Answer.NO),
        ("klein_ctx", "a", "A", Answer.YES),
        ("klein_ctx", "b", "aab", Answer.YES),
        ("klein_ctx", "b", "ab", Answer.NO),
        ("hex_ctx", "xY", "Yx", Answer.YES),
        ("hex_ctx", "x", "y", Answer.NO),
    ],
)
def test_conjugacy(request, ctx_name, w1, w2, verdict):
    ctx = request.getfixturevalue(ctx_name)
    answer = conjugacy(w1, w2, ctx)
    assert answer.verdict == verdict
    if verdict == Answer.YES:
        assert ctx.equal(conjugate_of(w1, answer.conjugator), w2)


@pytest.mark.parametrize(
    "ctx_name, w, twice",
    [
        ("z2_ctx", "ab", 4),
        ("z2_ctx", "a", 2),
        ("z2_ctx", "aabb", 8),
        ("z2_ctx", "", 0),
        ("klein_ctx", "ab", 2),
        ("klein_ctx", "aB", 2),
        ("klein_ctx", "a", 2),
        ("klein_ctx", "b", 2),
        ("klein_ctx", "bb", 4),
        ("hex_ctx", "xY", 4),
        ("hex_ctx", "x", 2),
        ("freetri_ctx", "c", 2),
    ],
)
def test_translation_number(request, ctx_name, w, twice):
    assert translation_number(w, request.getfixturevalue(ctx_name)).twice == twice


def test_wall_fires_on_klein_product(klein_ctx, z2_ctx):
    assert wall_fires("ab", klein_ctx)
    assert not wall_fires("ab", z2_ctx)
    assert not wall_fires("", z2_ctx)


@pytest.mark.parametrize("ctx_name, w", [("z2_ctx", "aB"), ("klein_ctx", "ab"), ("hex_ctx", "xY"), ("klein_ctx", "bA")])
def test_translation_number_is_homogeneous(request, ctx_name, w):
    ctx = request.getfixturevalue(ctx_name)
    tau = translation_number(w, ctx)
    for k in range(2, 5):
        assert translation_number(w * k, ctx).twice == k * tau.twice


@pytest.mark.parametrize("ctx_name, w, h", [("klein_ctx", "ab", "b"), ("z2_ctx", "aab", "bA"), ("hex_ctx", "xY", "z")])
def test_translation_number_is_a_class_invariant(request, ctx_name, w, h):
    ctx = request.getfixturevalue(ctx_name)
    tau = translation_number(w, ctx)
    assert translation_number(inverse(w), ctx) == tau
    assert translation_number(conjugate_of(w, h), ctx) == tau


@pytest.mark.parametrize("k", range(1, 10))
def test_power_length_on_klein(klein_ctx, k):
    # the wall under (ab)^2 costs one letter per two periods
    length = k if k % 2 == 0 else k + 1
    assert power_length("ab", k, klein_ctx) == length
    assert oracle_distance("ab" * k, klein_ctx.model) == length


def test_power_length_on_commutator(z2_ctx):
    assert power_length("ab", 3, z2_ctx) == 6
    with pytest.raises(InvalidArgument):
        power_length("ab", 0, z2_ctx)


def test_periodic_square(klein_ctx):
    bottom = periodic_square("ab", klein_ctx)
    assert bottom == "bb"
    for k in range(1, 5):
        assert power_length(bottom, k, klein_ctx) == 2 * k


def test_torsion_free(z2_ctx, klein_ctx, hex_ctx):
    assert is_torsion_free_upto("ab", z2_ctx)
    assert is_torsion_free_upto("aB", klein_ctx)
    assert is_torsion_free_upto("xY", hex_ctx)
    assert is_torsion_free_upto("abAB", z2_ctx)


def test_square_root_in_commutator(z2_ctx):
    answer = nth_root("aabb", 2, z2_ctx)
    assert answer.verdict == Answer.YES
    assert len(answer.witness) == 2
    assert z2_ctx.equal(conjugate_of(answer.witness * 2, answer.conjugator), "aabb")
    assert answer.to_dict()["verdict"] == "yes"


def test_missing_square_root(z2_ctx):
    answer = nth_root("aab", 2, z2_ctx)
    assert answer.verdict == Answer.NO
    assert answer.reason == NoReason.EXHAUSTED
    assert answer.to_dict() == {"verdict": "no", "reason": "Exhausted"}


def test_root_length_bound(z2_ctx):
    answer = nth_root("ab", 3, z2_ctx)
    assert answer.verdict == Answer.NO
    assert answer.reason == NoReason.LENGTH_BOUND


def test_square_root_in_klein(klein_ctx):
    answer = nth_root("bb", 2, klein_ctx)
    assert answer.verdict == Answer.YES
    assert klein_ctx.equal(conjugate_of(answer.witness * 2, answer.conjugator), "bb")


def test_trivial_roots(z2_ctx):
    assert nth_root("ab", 1, z2_ctx).witness == "ab"
    assert nth_root("", 3, z2_ctx).verdict == Answer.YES
    with pytest.raises(InvalidArgument):
        nth_root("ab", 0, z2_ctx)


@pytest.mark.parametrize("ctx_name, w, n", [("z2_ctx", "aaaaaa", 6), ("z2_ctx", "ab", 1), ("klein_ctx", "bb", 2)])
def test_max_root(request, ctx_name, w, n):
    ctx = request.getfixturevalue(ctx_name)
    result = max_root(w, ctx)
    assert result.verdict == Answer.YES
    assert result.n == n
    assert ctx.equal(conjugate_of(result.witness * n, result.conjugator), w)


def test_max_root_of_identity(z2_ctx):
    with pytest.raises(IdentityInput):
        max_root("abAB", z2_ctx)


def test_power_conjugacy(klein_ctx, z2_ctx):
    answer = power_conjugacy("bb", "ab", klein_ctx)
    assert answer.verdict == Answer.YES
    assert answer.n == 2
    assert klein_ctx.equal(conjugate_of("bb", answer.conjugator), "abab")
    assert power_conjugacy("a", "b", z2_ctx).verdict == Answer.NO


def test_power_conjugacy_negative_exponent(z2_ctx):
    answer = power_conjugacy("AA", "a", z2_ctx)
    assert answer.verdict == Answer.YES
    assert answer.n == -2


def test_power_conjugacy_to_identity(z2_ctx):
    assert power_conjugacy("abAB", "a", z2_ctx).n == 0
    assert power_conjugacy("a", "abAB", z2_ctx).verdict == Answer.NO


@pytest.mark.parametrize("twice, count", [(0, 1), (2, 5), (4, 13)])
def test_count_classes_on_commutator(z2_ctx, twice, count):
    result = count_classes_by_tau(HalfInteger(twice), z2_ctx)
    assert result.count == count
    assert not result.inconclusive


def test_count_classes_lists_representatives(z2_ctx):
    result = count_classes_by_tau(HalfInteger(2), z2_ctx)
    assert result.reps == ("", "A", "B", "a", "b")
    assert result.to_dict()["count"] == 5


def test_classes_grow_with_r(klein_ctx):
    counts = [count_classes_by_tau(HalfInteger(twice), klein_ctx).count for twice in range(5)]
    assert counts == sorted(counts)


def test_uncertified_context_still_finds_representatives(z2):
    ctx = GroupContext(z2, Bounds(conj=2), certify=False)
    result = shortest_class_rep("bbaB", ctx)
    assert result.rep == "ab"
    assert not result.certified


def test_generic_context_decides_with_reduction():
    ctx = GroupContext(parse_presentation("gens: x y\nrel: xyXY"), Bounds(conj=2))
    assert ctx.model is None
    assert translation_number("xy", ctx).twice == 4
    assert conjugacy("xy", "yx", ctx).verdict == Answer.YES
    assert conjugacy("x", "y", ctx).verdict == Answer.NO
