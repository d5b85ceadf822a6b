"""
Shortest conjugacy class representatives, exact translation numbers, roots and power conjugacy.

Translation numbers come from the wall dichotomy: with u a shortest representative of length n, the powers of u
either stay geodesic (tau = n) or every period hides a bad subword (tau = n - 1 for squares, n - 1/2 for
triangles).

:copyright: (c) 2024 by the cancelkit authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from functools import cached_property
from typing import Any, Hashable

from cancelkit.config import Bounds
from cancelkit.const import ModelName
from cancelkit.core import (
    IdentityInput,
    InvalidArgument,
    Presentation,
    Word,
    cyclic_reduce,
    free_reduce,
    inverse,
    inverse_letter,
    is_cyclically_reduced,
    rotations,
)
from cancelkit.geodesic import (
    GeodesicDFA,
    GeometryKind,
    build_geodesic_dfa,
    find_bad_subword,
    make_scanner,
    reduce_to_geodesic,
)
from cancelkit.oracle import GroupModel, select_model

_LOG = logging.getLogger(__name__)


class Answer(StrEnum):
    """Decision outcome."""

    YES = "yes"
    NO = "no"
    INCONCLUSIVE = "inconclusive"


class NoReason(StrEnum):
    """Why a root question was answered no."""

    LENGTH_BOUND = "LengthBound"
    EXHAUSTED = "Exhausted"


@dataclass(frozen=True, order=True)
class HalfInteger:
    """Nonnegative multiple of 1/2, stored as twice its value."""

    twice: int

    def __post_init__(self):
        """Reject negative values."""
        if self.twice < 0:
            raise InvalidArgument(f"half integer must be nonnegative, got {self.twice}/2")

    @classmethod
    def parse(cls, text: str) -> "HalfInteger":
        """Read "2", "3/2" or "1.5"."""
        try:
            value = Fraction(text)
        except (ValueError, ZeroDivisionError) as ex:
            raise InvalidArgument(f"not a number: {text}") from ex
        twice = value * 2
        if twice.denominator != 1:
            raise InvalidArgument(f"{text} is not a multiple of 1/2")
        return cls(int(twice))

    @property
    def value(self) -> Fraction:
        """Exact value."""
        return Fraction(self.twice, 2)

    def __str__(self) -> str:
        return str(self.value)

    def to_dict(self) -> dict[str, Any]:
        """Json form."""
        return {"twice": self.twice}


@dataclass
class ClassRep:
    """
    Shortest representative found for a conjugacy class.

    conjugator is a word h with h^-1 w h = rep for the input w; orbit maps the least spelling of every explored
    element of the same length plateau to such a conjugator.
    """

    rep: Word
    length: int
    trail: list[tuple[str, Word]]
    certified: bool
    conjugator: Word
    orbit: dict[Word, Word] = field(default_factory=dict, repr=False)

    def to_dict(self) -> dict[str, Any]:
        """Json form."""
        return {
            "rep": self.rep,
            "length": self.length,
            "certified": self.certified,
            "conjugator": self.conjugator,
            "trail": [f"{step} {word}" for step, word in self.trail],
        }


@dataclass(frozen=True)
class ConjugacyAnswer:
    """Conjugacy verdict; for yes, conjugator g satisfies g^-1 w1 g = w2."""

    verdict: Answer
    conjugator: Word | None = None
    bound: int | None = None

    def to_dict(self) -> dict[str, Any]:
        """Json form."""
        data: dict[str, Any] = {"verdict": str(self.verdict)}
        if self.conjugator is not None:
            data["conjugator"] = self.conjugator
        if self.bound is not None:
            data["bound"] = self.bound
        return data


@dataclass(frozen=True)
class RootAnswer:
    """Answer to x^n = w; for yes, conjugator g satisfies g^-1 witness^n g = w."""

    verdict: Answer
    witness: Word | None = None
    conjugator: Word | None = None
    reason: NoReason | None = None
    bound: int | None = None

    def to_dict(self) -> dict[str, Any]:
        """Json form, a tagged union on verdict."""
        if self.verdict == Answer.YES:
            return {"verdict": str(self.verdict), "witness": self.witness, "conjugator": self.conjugator}
        if self.verdict == Answer.NO:
            return {"verdict": str(self.verdict), "reason": str(self.reason)}
        return {"verdict": str(self.verdict), "bound": self.bound}


@dataclass(frozen=True)
class MaxRoot:
    """Largest n with an n-th root; inconclusive when some larger n could not be decided."""

    n: int
    witness: Word
    conjugator: Word
    verdict: Answer = Answer.YES

    def to_dict(self) -> dict[str, Any]:
        """Json form."""
        return {"verdict": str(self.verdict), "n": self.n, "witness": self.witness, "conjugator": self.conjugator}


@dataclass(frozen=True)
class PowerConjugacy:
    """Whether w1 is conjugate to w2^n; for yes, conjugator g satisfies g^-1 w1 g = w2^n."""

    verdict: Answer
    n: int | None = None
    conjugator: Word | None = None
    bound: int | None = None

    def to_dict(self) -> dict[str, Any]:
        """Json form."""
        data: dict[str, Any] = {"verdict": str(self.verdict)}
        if self.verdict == Answer.YES:
            data.update(n=self.n, conjugator=self.conjugator)
        elif self.bound is not None:
            data["bound"] = self.bound
        return data


@dataclass(frozen=True)
class ClassCount:
    """Conjugacy classes with translation number at most r."""

    r: HalfInteger
    reps: tuple[Word, ...]
    inconclusive: bool = False

    @property
    def count(self) -> int:
        """Number of classes."""
        return len(self.reps)

    def to_dict(self) -> dict[str, Any]:
        """Json form."""
        return {"r": self.r.to_dict(), "count": self.count, "reps": list(self.reps), "inconclusive": self.inconclusive}


class GroupContext:
    """A C'' presentation with its scanner, lazily built automaton, oracle model and search bounds."""

    def __init__(
        self,
        presentation: Presentation,
        bounds: Bounds | None = None,
        model: ModelName | str = ModelName.AUTO,
        certify: bool = True,
    ):
        self.presentation = presentation
        self.bounds = bounds or Bounds()
        self.scanner = make_scanner(presentation)
        self.report = self.scanner.report
        self.sym = self.scanner.sym
        self.kind = self.scanner.kind
        self.oracle = select_model(model, presentation)
        self.model: GroupModel | None = self.oracle if isinstance(self.oracle, GroupModel) else None
        if self.model is None:
            _LOG.warning("No reference model for this presentation, conjugacy refutation uses the abelianization")
        self.certify = certify
        self.class_cache: dict[Word, ClassRep] = {}
        self.tau_cache: dict[Word, HalfInteger] = {}

    @cached_property
    def dfa(self) -> GeodesicDFA:
        """Geodesic automaton, built on first use."""
        return build_geodesic_dfa(self.scanner)

    @property
    def alphabet(self) -> tuple[str, ...]:
        """Letters of the presentation."""
        return self.presentation.alphabet

    def check(self, *words: Word) -> None:
        """Raise AlphabetError for words outside the alphabet."""
        for w in words:
            self.presentation.check_word(w)

    def reduce(self, w: Word) -> Word:
        """Geodesic word for the element of w."""
        return reduce_to_geodesic(w, self.scanner)[0]

    def key(self, w: Word) -> Hashable:
        """Element key: the model element when there is a model, else the reduced word."""
        if self.model is not None:
            return self.model.evaluate(w)
        return self.reduce(w)

    def equal(self, w1: Word, w2: Word) -> bool:
        """Decide equality of two words."""
        if self.model is not None:
            return self.model.evaluate(w1) == self.model.evaluate(w2)
        return self.reduce(w1 + inverse(w2)) == ""


def _settle(ctx: GroupContext, word: Word, conj: Word) -> tuple[Word, Word]:
    """Reduce and cyclically reduce until the word is a cyclically reduced geodesic; conj tracks h^-1 w h."""
    while True:
        geodesic = ctx.reduce(word)
        core, c = cyclic_reduce(geodesic)
        conj = free_reduce(conj + c)
        if core == geodesic:
            return core, conj
        word = core


def _moves(ctx: GroupContext, u: Word, h: Word) -> list[tuple[str, Word, Word]]:
    moves = [("rotate", u[k:] + u[:k], free_reduce(h + u[:k])) for k in range(1, len(u))]
    moves.extend((f"conjugate {x}", inverse_letter(x) + u + x, free_reduce(h + x)) for x in ctx.alphabet)
    return moves


def _explore(
    ctx: GroupContext, word: Word, conj: Word, trail: list[tuple[str, Word]]
) -> tuple[dict[Word, Word], bool]:
    """
    Breadth first search of the plateau of class elements up to one letter longer than the best one.

    Nodes are elements, each held as the least spelling reached for it, so the plateau grows with the class and not
    with the number of geodesic spellings of its elements.
    """
    while True:
        start = ctx.key(word)
        plateau: dict[Hashable, tuple[Word, Word]] = {start: (word, conj)}
        queue = deque([start])
        best = len(word)
        truncated = False
        shorter = None
        while queue and shorter is None:
            u, h = plateau[queue.popleft()]
            for step, candidate, candidate_conj in _moves(ctx, u, h):
                v, g = _settle(ctx, candidate, candidate_conj)
                if len(v) < best:
                    shorter = (step, v, g)
                    break
                if len(v) > best + 1:
                    continue
                key = ctx.key(v)
                if key in plateau:
                    if v < plateau[key][0]:
                        plateau[key] = (v, g)
                    continue
                if len(plateau) >= ctx.bounds.orbit_cap:
                    truncated = True
                    continue
                plateau[key] = (v, g)
                queue.append(key)
        if shorter is None:
            _LOG.debug("Class plateau of %s: %d elements", word, len(plateau))
            return dict(plateau.values()), truncated
        step, word, conj = shorter
        trail.append((step, word))


def _sweep(ctx: GroupContext, rep: Word, depth: int) -> tuple[Word, Word] | None:
    """Look for a conjugate shorter than rep among conjugators of length at most depth."""
    seen = {ctx.key(rep)}
    frontier = [(rep, "")]
    for _ in range(depth):
        nxt = []
        for g, k in frontier:
            for x in ctx.alphabet:
                word = ctx.reduce(inverse_letter(x) + g + x)
                key = ctx.key(word)
                if key in seen:
                    continue
                seen.add(key)
                core, c = cyclic_reduce(word)
                if len(core) < len(rep):
                    return core, free_reduce(k + x + c)
                nxt.append((word, free_reduce(k + x)))
        frontier = nxt
        if not frontier:
            break
    return None


def shortest_class_rep(w: Word, ctx: GroupContext) -> ClassRep:
    """
    Find a shortest word conjugate to w.

    Starting from the cyclically reduced geodesic form of w, explore rotations and single letter conjugations
    (each followed by reduction) over representatives at most one letter longer than the best found, restarting
    whenever a shorter one appears. With certification on, a sweep over all conjugators up to the configured
    length confirms that nothing shorter exists.

    :return: the representative, lexicographically least among the shortest explored words
    """
    ctx.check(w)
    if w in ctx.class_cache:
        return ctx.class_cache[w]
    trail: list[tuple[str, Word]] = []
    word, conj = _settle(ctx, w, "")
    trail.append(("settle", word))
    while True:
        orbit, truncated = _explore(ctx, word, conj, trail)
        best = min(len(v) for v in orbit)
        rep = min(v for v in orbit if len(v) == best)
        if not ctx.certify:
            certified = False
            break
        shorter = _sweep(ctx, rep, ctx.bounds.conj)
        if shorter is None:
            certified = not truncated
            break
        word, conj = _settle(ctx, *shorter)
        trail.append(("sweep", word))
    if ctx.certify and not certified:
        _LOG.warning("Class representative %s of %s is not certified", rep, w)
    result = ClassRep(rep, len(rep), trail, certified, orbit[rep], orbit)
    ctx.class_cache[w] = result
    return result


def conjugacy(w1: Word, w2: Word, ctx: GroupContext) -> ConjugacyAnswer:
    """
    Decide whether w1 and w2 are conjugate.

    Tiers: certified class lengths differ, shared plateau representative, reference model or abelianization
    refutation, then a bounded conjugator search between the representatives.
    """
    c1 = shortest_class_rep(w1, ctx)
    c2 = shortest_class_rep(w2, ctx)
    if c1.certified and c2.certified and c1.length != c2.length:
        return ConjugacyAnswer(Answer.NO)
    keys2 = {ctx.key(v): h for v, h in c2.orbit.items()}
    common = sorted(v for v in c1.orbit if ctx.key(v) in keys2)
    if common:
        v = common[0]
        return ConjugacyAnswer(Answer.YES, free_reduce(c1.orbit[v] + inverse(keys2[ctx.key(v)])))
    if ctx.model is not None:
        if ctx.model.class_key(ctx.model.evaluate(w1)) != ctx.model.class_key(ctx.model.evaluate(w2)):
            return ConjugacyAnswer(Answer.NO)
    elif not ctx.oracle.lattice.same_image(w1, w2):
        return ConjugacyAnswer(Answer.NO)
    k = _search_conjugator(ctx, c1.rep, c2.rep, ctx.bounds.conj)
    if k is not None:
        return ConjugacyAnswer(Answer.YES, free_reduce(c1.conjugator + k + inverse(c2.conjugator)))
    return ConjugacyAnswer(Answer.INCONCLUSIVE, bound=ctx.bounds.conj)


def _search_conjugator(ctx: GroupContext, u: Word, v: Word, depth: int) -> Word | None:
    """Breadth first search for k with k^-1 u k = v, |k| <= depth."""
    if ctx.equal(u, v):
        return ""
    seen = {ctx.key(u)}
    frontier = [(u, "")]
    for _ in range(depth):
        nxt = []
        for g, k in frontier:
            for x in ctx.alphabet:
                word = ctx.reduce(inverse_letter(x) + g + x)
                key = ctx.key(word)
                if key in seen:
                    continue
                seen.add(key)
                if ctx.equal(word, v):
                    return free_reduce(k + x)
                nxt.append((word, free_reduce(k + x)))
        frontier = nxt
        if not frontier:
            break
    return None


def wall_fires(u: Word, ctx: GroupContext) -> bool:
    """Check whether the bi-infinite power of u has a bad subword starting in one period."""
    return bool(u) and find_bad_subword(u * 4, ctx.scanner, starts=len(u)) is not None


def translation_number(w: Word, ctx: GroupContext) -> HalfInteger:
    """
    Exact translation number of w.

    With u a shortest representative of length n: squares give 1 for n = 1, else n - 1 when the wall fires and n
    otherwise; triangles give n - 1/2 when the wall fires and n otherwise.
    """
    if w in ctx.tau_cache:
        return ctx.tau_cache[w]
    u = shortest_class_rep(w, ctx).rep
    n = len(u)
    if n == 0:
        twice = 0
    elif ctx.kind is GeometryKind.SQUARE:
        twice = 2 if n == 1 else 2 * (n - 1 if wall_fires(u, ctx) else n)
    else:
        twice = 2 * n - 1 if wall_fires(u, ctx) else 2 * n
    tau = HalfInteger(twice)
    ctx.tau_cache[w] = tau
    return tau


def power_length(w: Word, k: int, ctx: GroupContext) -> int:
    """Word length of w^k."""
    if k < 1:
        raise InvalidArgument(f"power must be at least 1, got {k}")
    ctx.check(w)
    return len(ctx.reduce(w * k))


def periodic_square(w: Word, ctx: GroupContext) -> Word:
    """
    Geodesic word for the square of the shortest representative u of w.

    When the wall fires this is the bottom of a two period wall, a periodically geodesic element.
    """
    u = shortest_class_rep(w, ctx).rep
    return ctx.reduce(u + u)


def is_torsion_free_upto(w: Word, ctx: GroupContext, kmax: int = 6) -> bool:
    """Check that no power w^k, k <= kmax, of a nontrivial w is the identity."""
    ctx.check(w)
    if not ctx.reduce(w):
        return True
    return all(ctx.reduce(w * k) for k in range(1, kmax + 1))


def _root_candidates(ctx: GroupContext, max_len: int) -> list[Word]:
    """Cyclically reduced geodesics up to max_len, one per class of rotations and inverses, each with its inverse."""
    seen: set[Word] = set()
    candidates = []
    for v in ctx.dfa.words(max_len):
        if not v or not is_cyclically_reduced(v):
            continue
        key = min(rotations(v) + rotations(inverse(v)))
        if key in seen:
            continue
        seen.add(key)
        candidates.extend((v, inverse(v)))
    return candidates


def nth_root(w: Word, n: int, ctx: GroupContext) -> RootAnswer:
    """
    Decide whether x^n = w has a solution, up to conjugacy of x.

    Roots are searched among geodesics of length at most |u|/n + 1 (squares) or |u|/n + 1/2 (triangles), u a
    shortest representative of w; translation numbers refute candidates before any conjugacy search.
    """
    if n < 1:
        raise InvalidArgument(f"root degree must be at least 1, got {n}")
    ctx.check(w)
    if n == 1:
        return RootAnswer(Answer.YES, w, "")
    u = shortest_class_rep(w, ctx).rep
    length = len(u)
    if length == 0:
        return RootAnswer(Answer.YES, "", "")
    if ctx.kind is GeometryKind.SQUARE:
        if length < n:
            return RootAnswer(Answer.NO, reason=NoReason.LENGTH_BOUND)
        max_len = length // n + 1
    else:
        if 2 * length < n:
            return RootAnswer(Answer.NO, reason=NoReason.LENGTH_BOUND)
        max_len = (2 * length + n) // (2 * n)

    tau = translation_number(w, ctx)
    inconclusive = False
    for v in _root_candidates(ctx, max_len):
        if n * translation_number(v, ctx).twice != tau.twice:
            continue
        answer = conjugacy(v * n, w, ctx)
        if answer.verdict == Answer.YES:
            return RootAnswer(Answer.YES, v, answer.conjugator)
        if answer.verdict == Answer.INCONCLUSIVE:
            inconclusive = True
    if inconclusive:
        return RootAnswer(Answer.INCONCLUSIVE, bound=ctx.bounds.conj)
    return RootAnswer(Answer.NO, reason=NoReason.EXHAUSTED)


def max_root(w: Word, ctx: GroupContext) -> MaxRoot:
    """
    Largest n for which w has an n-th root.

    :raises IdentityInput: when w represents the identity
    """
    u = shortest_class_rep(w, ctx).rep
    if not u:
        raise IdentityInput(f"{w or '(empty)'} represents the identity")
    upper = len(u) if ctx.kind is GeometryKind.SQUARE else 2 * len(u)
    undecided = False
    for n in range(upper, 1, -1):
        answer = nth_root(w, n, ctx)
        if answer.verdict == Answer.YES:
            verdict = Answer.INCONCLUSIVE if undecided else Answer.YES
            return MaxRoot(n, answer.witness, answer.conjugator, verdict)
        if answer.verdict == Answer.INCONCLUSIVE:
            undecided = True
    return MaxRoot(1, w, "", Answer.INCONCLUSIVE if undecided else Answer.YES)


def power_conjugacy(w1: Word, w2: Word, ctx: GroupContext) -> PowerConjugacy:
    """
    Decide whether w1 is conjugate to w2^n for some integer n.

    Conjugacy preserves translation numbers and tau(w2^n) = |n| tau(w2) >= |n| / 2, which bounds |n| by twice the
    class length of w1.
    """
    ctx.check(w1, w2)
    u1 = shortest_class_rep(w1, ctx).rep
    if not u1:
        return PowerConjugacy(Answer.YES, 0, "")
    tau1 = translation_number(w1, ctx)
    tau2 = translation_number(w2, ctx)
    if tau2.twice == 0:
        return PowerConjugacy(Answer.NO)
    bound = 2 * len(u1)
    inconclusive = False
    for n in range(1, bound + 1):
        if n * tau2.twice != tau1.twice:
            continue
        for signed, base in ((n, w2), (-n, inverse(w2))):
            answer = conjugacy(w1, base * n, ctx)
            if answer.verdict == Answer.YES:
                return PowerConjugacy(Answer.YES, signed, answer.conjugator)
            if answer.verdict == Answer.INCONCLUSIVE:
                inconclusive = True
    if inconclusive:
        return PowerConjugacy(Answer.INCONCLUSIVE, bound=ctx.bounds.conj)
    return PowerConjugacy(Answer.NO)


def count_classes_by_tau(r: HalfInteger, ctx: GroupContext) -> ClassCount:
    """
    Conjugacy classes with translation number at most r.

    Every such class has a representative of length at most r + 1 (squares) or r + 1/2 (triangles), so the
    geodesics up to that length are bucketed by conjugacy.
    """
    max_len = (r.twice + 2) // 2 if ctx.kind is GeometryKind.SQUARE else (r.twice + 1) // 2
    reps: list[Word] = []
    covered: set[Hashable] = set()
    inconclusive = False
    for v in ctx.dfa.words(max_len):
        if not is_cyclically_reduced(v) or ctx.key(v) in covered:
            continue
        if translation_number(v, ctx) > r:
            continue
        rep = shortest_class_rep(v, ctx)
        if ctx.key(rep.rep) in covered:
            covered.update(map(ctx.key, rep.orbit))
            continue
        same = False
        for other in reps:
            if len(other) != rep.length:
                continue
            answer = conjugacy(rep.rep, other, ctx)
            if answer.verdict == Answer.YES:
                same = True
                break
            if answer.verdict == Answer.INCONCLUSIVE:
                inconclusive = True
        covered.update(map(ctx.key, rep.orbit))
        if not same:
            reps.append(rep.rep)
    _LOG.debug("Classes with tau <= %s: %d", r, len(reps))
    return ClassCount(r, tuple(sorted(reps, key=lambda u: (len(u), u))), inconclusive)
