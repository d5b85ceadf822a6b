"""
Alphabets, words, free and cyclic reduction, presentation parsing and symmetrized relator sets.

Words are plain ASCII strings: a lowercase letter is a generator, the matching uppercase letter its inverse and the
empty string the identity.

:copyright: (c) 2024 by the cancelkit authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

import logging
import random
import string
from collections import defaultdict
from dataclasses import dataclass
from itertools import product
from typing import Iterator, TextIO

from cancelkit.const import COMMENT_CHAR, GENS_PREFIX, REL_PREFIX, ExitCodes

_LOG = logging.getLogger(__name__)

Letter = str
Word = str


class CancelKitError(Exception):
    """Base class of all cancelkit errors."""

    exit_code = ExitCodes.DATA_ERROR


class PresentationSyntaxError(CancelKitError):
    """Malformed presentation line."""


class AlphabetError(CancelKitError):
    """Letter outside the declared generators."""


class RelatorError(CancelKitError):
    """Relator not cyclically reduced, too short or duplicated."""


class UnsupportedPresentation(CancelKitError):
    """Presentation outside the C''(4)-T(4) and C''(3)-T(6) classes."""


class InvalidArgument(CancelKitError):
    """Argument outside its documented range."""


class IdentityInput(CancelKitError):
    """Operation undefined on the identity element."""


class ModelMismatch(CancelKitError):
    """Word alphabet differs from the oracle model alphabet."""


class CapExceeded(CancelKitError):
    """Oracle search left its feasible radius."""


class OracleError(CancelKitError):
    """Oracle query the selected model cannot answer."""


def inverse_letter(x: Letter) -> Letter:
    """Return the inverse of a letter."""
    return x.swapcase()


def inverse(w: Word) -> Word:
    """Return the formal inverse of a word."""
    return w[::-1].swapcase()


def free_reduce(w: Word) -> Word:
    """Return the freely reduced word equal to w in the free group."""
    stack: list[str] = []
    for x in w:
        if stack and stack[-1] == x.swapcase():
            stack.pop()
        else:
            stack.append(x)
    return "".join(stack)


def is_freely_reduced(w: Word) -> bool:
    """Check that w has no adjacent pair of mutually inverse letters."""
    return all(w[i] != w[i + 1].swapcase() for i in range(len(w) - 1))


def is_cyclically_reduced(w: Word) -> bool:
    """Check that w is freely reduced and its first letter does not cancel its last one."""
    return is_freely_reduced(w) and (len(w) <= 1 or w[0] != w[-1].swapcase())


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """
    Split a word into a cyclically reduced core and a conjugator.

    :param w: any word
    :return: (core, conjugator) with free_reduce(w) == conjugator + core + inverse(conjugator)
    """
    w = free_reduce(w)
    k = 0
    while len(w) - 2 * k >= 2 and w[k] == w[-1 - k].swapcase():
        k += 1
    return w[k : len(w) - k], w[:k]


def rotations(w: Word) -> list[Word]:
    """Return all cyclic rotations of w, starting with w itself."""
    if not w:
        return [w]
    return [w[k:] + w[:k] for k in range(len(w))]


def minimal_period(w: Word) -> int:
    """Return the least d dividing len(w) such that w is a power of its prefix of length d."""
    n = len(w)
    for d in range(1, n + 1):
        if n % d == 0 and w[:d] * (n // d) == w:
            return d
    return n


def is_proper_power(w: Word) -> bool:
    """Check whether w = s^k for some word s and k >= 2."""
    return len(w) > 0 and minimal_period(w) < len(w)


def alphabet_of(generators: tuple[str, ...]) -> tuple[Letter, ...]:
    """Return the letters x, X for every generator x, in declaration order."""
    return tuple(x for g in generators for x in (g, g.upper()))


def freely_reduced_words(alphabet: tuple[Letter, ...], length: int) -> Iterator[Word]:
    """Enumerate the freely reduced words of exactly the given length, in alphabet order."""
    for letters in product(alphabet, repeat=length):
        w = "".join(letters)
        if is_freely_reduced(w):
            yield w


def random_reduced_word(rng: random.Random, alphabet: tuple[Letter, ...], length: int) -> Word:
    """Draw a uniformly random freely reduced word of the given length."""
    letters: list[str] = []
    while len(letters) < length:
        x = rng.choice(alphabet)
        if letters and letters[-1] == x.swapcase():
            continue
        letters.append(x)
    return "".join(letters)


def _orbit(r: Word) -> frozenset[Word]:
    return frozenset(rotations(r)) | frozenset(rotations(inverse(r)))


@dataclass(frozen=True)
class Presentation:
    """Group presentation with single letter generators."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        """Validate generators and relators."""
        if not self.generators:
            raise PresentationSyntaxError("a presentation needs at least one generator")
        for g in self.generators:
            if len(g) != 1 or g not in string.ascii_lowercase:
                raise PresentationSyntaxError(f"generator {g!r} is not a single lowercase letter")
        if len(set(self.generators)) != len(self.generators):
            raise PresentationSyntaxError("duplicate generators")
        if not self.relators:
            raise RelatorError("a presentation needs at least one relator")
        letters = set(self.alphabet)
        for r in self.relators:
            stray = sorted(set(r) - letters)
            if stray:
                raise AlphabetError(f"relator {r} uses letters {''.join(stray)} outside the generators")
            if not is_cyclically_reduced(r):
                raise RelatorError(f"relator {r} is not cyclically reduced")
            if len(r) < 3:
                raise RelatorError(f"relator {r} is shorter than 3")
        seen: dict[frozenset[Word], Word] = {}
        for r in self.relators:
            orbit = _orbit(r)
            if orbit in seen:
                raise RelatorError(f"relator {r} duplicates {seen[orbit]} up to rotation and inversion")
            seen[orbit] = r

    @property
    def alphabet(self) -> tuple[Letter, ...]:
        """Letters of X = S u S^-1."""
        return alphabet_of(self.generators)

    def check_word(self, w: Word) -> None:
        """Raise AlphabetError when w uses a letter outside the alphabet."""
        stray = sorted(set(w) - set(self.alphabet))
        if stray:
            raise AlphabetError(f"word {w} uses letters {''.join(stray)} outside the generators")


def parse_presentation(text: str | TextIO) -> Presentation:
    """
    Parse a presentation file.

    Grammar: one "gens: a b ..." line, one "rel: WORD" line per relator, "#" comments and blank lines ignored.

    :param text: file contents or an open text stream
    :return: the validated presentation
    """
    if not isinstance(text, str):
        text = text.read()
    generators: tuple[str, ...] | None = None
    relators: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(COMMENT_CHAR, 1)[0].strip()
        if not line:
            continue
        if line.startswith(GENS_PREFIX):
            if generators is not None:
                raise PresentationSyntaxError(f"line {lineno}: duplicate gens line")
            generators = tuple(line[len(GENS_PREFIX) :].split())
        elif line.startswith(REL_PREFIX):
            tokens = line[len(REL_PREFIX) :].split()
            if len(tokens) != 1 or not tokens[0].isascii() or not tokens[0].isalpha():
                raise PresentationSyntaxError(f"line {lineno}: expected one relator word, got {raw.strip()!r}")
            relators.append(tokens[0])
        else:
            raise PresentationSyntaxError(f"line {lineno}: unrecognized line {raw.strip()!r}")
    if generators is None:
        raise PresentationSyntaxError("missing gens line")

    presentation = Presentation(generators, tuple(relators))
    _LOG.debug("Parsed presentation with %d generators and %d relators", len(generators), len(relators))
    return presentation


def load_presentation(path: str) -> Presentation:
    """Read and parse a presentation file."""
    with open(path, "r", encoding="utf-8") as f:
        return parse_presentation(f)


def format_presentation(p: Presentation) -> str:
    """Serialize a presentation in canonical file form."""
    lines = [f"{GENS_PREFIX} {' '.join(p.generators)}"]
    lines.extend(f"{REL_PREFIX} {r}" for r in p.relators)
    return "\n".join(lines) + "\n"


@dataclass(frozen=True, eq=False)
class SymmetrizedSet:
    """Relators closed under cyclic rotation and inversion, indexed by prefix."""

    presentation: Presentation
    members: tuple[Word, ...]
    prefix_index: dict[Word, tuple[Word, ...]]
    origin: dict[Word, tuple[int, int, bool]]

    def __contains__(self, w: object) -> bool:
        return w in self.origin

    def with_prefix(self, prefix: Word) -> tuple[Word, ...]:
        """Members starting with prefix, sorted."""
        return self.prefix_index.get(prefix, ())

    def is_prefix(self, w: Word) -> bool:
        """Check whether w is a nonempty prefix of some member."""
        return w in self.prefix_index

    @property
    def max_length(self) -> int:
        """Length of the longest member."""
        return max(len(m) for m in self.members)


def symmetrize(p: Presentation) -> SymmetrizedSet:
    """Close the relators of p under rotation and inversion and index every prefix."""
    origin: dict[Word, tuple[int, int, bool]] = {}
    for idx, r in enumerate(p.relators):
        for inverted in (False, True):
            base = inverse(r) if inverted else r
            for k in range(len(base)):
                origin.setdefault(base[k:] + base[:k], (idx, k, inverted))
    members = tuple(sorted(origin))
    index: dict[Word, list[Word]] = defaultdict(list)
    for m in members:
        for length in range(1, len(m) + 1):
            index[m[:length]].append(m)
    _LOG.debug("Symmetrized %d relators into %d members", len(p.relators), len(members))
    return SymmetrizedSet(p, members, {k: tuple(v) for k, v in index.items()}, origin)
