"""
Independent ground truth: exact reference models, Cayley balls and bounded word problem search.

The reference models are closed form group structures, not presentations, so they check the scanner without
sharing any of its reasoning.

:copyright: (c) 2024 by the cancelkit authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

import logging
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from functools import reduce
from typing import Any, Hashable

from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from cancelkit.const import DEFAULT_BALL_CAP, DEFAULT_RADIUS, DEFAULT_REWRITE_CAP, REWRITE_NODE_CAP, ModelName
from cancelkit.core import (
    CapExceeded,
    InvalidArgument,
    Letter,
    ModelMismatch,
    OracleError,
    Presentation,
    Word,
    cyclic_reduce,
    free_reduce,
    inverse,
    parse_presentation,
    rotations,
    symmetrize,
)

_LOG = logging.getLogger(__name__)

Element = Hashable


class Verdict(StrEnum):
    """Outcome of an oracle comparison."""

    EQUAL = "Equal"
    DISTINCT = "Distinct"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class EqVerdict:
    """Equality or conjugacy verdict, bound set when inconclusive."""

    verdict: Verdict
    bound: int | None = None

    def to_dict(self) -> dict[str, Any]:
        """Json form."""
        data: dict[str, Any] = {"verdict": str(self.verdict)}
        if self.bound is not None:
            data["bound"] = self.bound
        return data


@dataclass(frozen=True)
class CayleyBall:
    """Elements within a radius of the identity with their exact distances."""

    radius: int
    table: dict[Element, int]
    spheres: tuple[int, ...]
    labels: dict[Element, str]

    def to_tsv(self) -> str:
        """One element key and distance per line, by distance."""
        return "".join(f"{self.labels[g]}\t{d}\n" for g, d in self.table.items())

    def to_dict(self) -> dict[str, Any]:
        """Json form."""
        return {"radius": self.radius, "spheres": list(self.spheres), "size": len(self.table)}


class GroupModel(ABC):
    """Group with an exact element representation, explored by a lazily grown Cayley ball."""

    name: ModelName
    text: str = ""

    def __init__(self, presentation: Presentation | None = None):
        self.presentation = presentation or parse_presentation(self.text)
        self.alphabet = self.presentation.alphabet
        self._letters = {x: self.letter(x) for x in self.alphabet}
        identity = self.identity
        self._table: dict[Element, int] = {identity: 0}
        self._frontier: list[Element] = [identity]
        self._radius = 0

    @property
    @abstractmethod
    def identity(self) -> Element:
        """Neutral element."""

    @abstractmethod
    def letter(self, x: Letter) -> Element:
        """Element of one letter."""

    @abstractmethod
    def multiply(self, g: Element, h: Element) -> Element:
        """Product g h."""

    @abstractmethod
    def invert(self, g: Element) -> Element:
        """Inverse of g."""

    def norm(self, g: Element) -> int | None:
        """Closed form word length, None when the model has none."""
        return None

    @abstractmethod
    def class_key(self, g: Element) -> Hashable:
        """Complete conjugacy invariant: equal keys exactly for conjugate elements."""

    def format_element(self, g: Element) -> str:
        """Element key as printed in ball dumps."""
        return ",".join(str(c) for c in g)

    def check_word(self, w: Word) -> None:
        """Raise ModelMismatch when w has letters outside the model alphabet."""
        stray = sorted(set(w) - set(self.alphabet))
        if stray:
            raise ModelMismatch(f"letters {''.join(stray)} are not in the {self.name} model")

    def evaluate(self, w: Word) -> Element:
        """Element represented by w."""
        self.check_word(w)
        return reduce(self.multiply, (self._letters[x] for x in w), self.identity)

    def matches(self, presentation: Presentation) -> bool:
        """Check whether presentation has the same generators and symmetrized relators as the model."""
        return presentation.generators == self.presentation.generators and set(
            symmetrize(presentation).members
        ) == set(symmetrize(self.presentation).members)

    def _grow(self, ball_cap: int) -> None:
        layer: dict[Element, None] = {}
        for g in self._frontier:
            for x in self.alphabet:
                h = self.multiply(g, self._letters[x])
                if h not in self._table:
                    layer[h] = None
        if len(self._table) + len(layer) > ball_cap:
            raise CapExceeded(f"{self.name} ball of radius {self._radius + 1} exceeds {ball_cap} elements")
        self._radius += 1
        for h in layer:
            self._table[h] = self._radius
        self._frontier = list(layer)
        _LOG.debug("%s ball radius %d: %d elements", self.name, self._radius, len(self._table))

    def distance(self, g: Element, radius_cap: int, ball_cap: int = DEFAULT_BALL_CAP) -> int | None:
        """Word length of g found by breadth first search, None beyond radius_cap."""
        while g not in self._table and self._radius < radius_cap and self._frontier:
            self._grow(ball_cap)
        d = self._table.get(g)
        return d if d is not None and d <= radius_cap else None

    def ball(self, radius: int, ball_cap: int = DEFAULT_BALL_CAP) -> CayleyBall:
        """Complete ball of the given radius."""
        while self._radius < radius and self._frontier:
            self._grow(ball_cap)
        table = {g: d for g, d in self._table.items() if d <= radius}
        spheres = [0] * (radius + 1)
        for d in table.values():
            spheres[d] += 1
        return CayleyBall(radius, table, tuple(spheres), {g: self.format_element(g) for g in table})


class Z2Commutator(GroupModel):
    """Free abelian group of rank two, a = (1, 0) and b = (0, 1)."""

    name = ModelName.Z2
    text = "gens: a b\nrel: abAB\n"

    @property
    def identity(self) -> Element:
        return (0, 0)

    def letter(self, x: Letter) -> Element:
        sign = 1 if x.islower() else -1
        return (sign, 0) if x.lower() == "a" else (0, sign)

    def multiply(self, g: Element, h: Element) -> Element:
        return (g[0] + h[0], g[1] + h[1])

    def invert(self, g: Element) -> Element:
        return (-g[0], -g[1])

    def norm(self, g: Element) -> int | None:
        return abs(g[0]) + abs(g[1])

    def class_key(self, g: Element) -> Hashable:
        return g


class KleinBottle(GroupModel):
    """
    Klein bottle group: pairs (m, n) with (m, n)(m', n') = (m + (-1)^n m', n + n').

    a = (1, 0), b = (0, 1). For even n the class of (m, n) is {(m, n), (-m, n)}, for odd n it is fixed by n and
    the parity of m.
    """

    name = ModelName.KLEIN
    text = "gens: a b\nrel: abaB\n"

    @property
    def identity(self) -> Element:
        return (0, 0)

    def letter(self, x: Letter) -> Element:
        sign = 1 if x.islower() else -1
        return (sign, 0) if x.lower() == "a" else (0, sign)

    def multiply(self, g: Element, h: Element) -> Element:
        twist = -1 if g[1] % 2 else 1
        return (g[0] + twist * h[0], g[1] + h[1])

    def invert(self, g: Element) -> Element:
        twist = -1 if g[1] % 2 else 1
        return (-twist * g[0], -g[1])

    def norm(self, g: Element) -> int | None:
        return abs(g[0]) + abs(g[1])

    def class_key(self, g: Element) -> Hashable:
        m, n = g
        return (n, abs(m)) if n % 2 == 0 else (n, m % 2)


class HexZ2(GroupModel):
    """Free abelian group of rank two on the hexagonal lattice, x = (1, 0), y = (0, 1), z = (-1, -1)."""

    name = ModelName.HEX
    text = "gens: x y z\nrel: xyz\nrel: xzy\n"

    _UNITS = {"x": (1, 0), "y": (0, 1), "z": (-1, -1)}

    @property
    def identity(self) -> Element:
        return (0, 0)

    def letter(self, x: Letter) -> Element:
        p, q = self._UNITS[x.lower()]
        return (p, q) if x.islower() else (-p, -q)

    def multiply(self, g: Element, h: Element) -> Element:
        return (g[0] + h[0], g[1] + h[1])

    def invert(self, g: Element) -> Element:
        return (-g[0], -g[1])

    def norm(self, g: Element) -> int | None:
        p, q = g
        return max(abs(p), abs(q)) if p * q >= 0 else abs(p) + abs(q)

    def class_key(self, g: Element) -> Hashable:
        return g


class FreeTriangle(GroupModel):
    """Free group on a and b, with c = b^-1 a^-1; elements are freely reduced words over a and b."""

    name = ModelName.FREETRI
    text = "gens: a b c\nrel: abc\n"

    _IMAGES = {"a": "a", "A": "A", "b": "b", "B": "B", "c": "BA", "C": "ab"}

    @property
    def identity(self) -> Element:
        return ""

    def letter(self, x: Letter) -> Element:
        return self._IMAGES[x]

    def multiply(self, g: Element, h: Element) -> Element:
        return free_reduce(g + h)

    def invert(self, g: Element) -> Element:
        return inverse(g)

    def class_key(self, g: Element) -> Hashable:
        core, _ = cyclic_reduce(g)
        return min(rotations(core))

    def format_element(self, g: Element) -> str:
        return g or "1"


class AbelianLattice:
    """Relator exponent vectors in Hermite normal form, deciding equality in the abelianization."""

    def __init__(self, presentation: Presentation):
        self.generators = presentation.generators
        columns = [v for v in (self.image(r) for r in presentation.relators) if any(v)]
        self.pivots: list[tuple[int, list[int]]] = []
        if not columns:
            return
        size = len(self.generators)
        # zero columns up to a square matrix so every row gets a pivot pass
        columns += [[0] * size] * max(0, size - len(columns))
        relators = Matrix(size, len(columns), lambda i, j: columns[j][i])
        hnf = hermite_normal_form(relators)
        for j in range(hnf.cols):
            column = [int(c) for c in hnf.col(j)]
            rows = [i for i, c in enumerate(column) if c]
            if rows:
                self.pivots.append((rows[-1], column))
        # columns are echelon: distinct lowest nonzero rows, cleared from the bottom up
        self.pivots.sort(key=lambda pivot: pivot[0], reverse=True)
        _LOG.debug("Relator lattice of rank %d in %d generators", len(self.pivots), len(self.generators))

    def image(self, w: Word) -> list[int]:
        """Exponent sum of every generator in w."""
        return [w.count(g) - w.count(g.upper()) for g in self.generators]

    def contains(self, vector: list[int]) -> bool:
        """Check whether vector is an integer combination of the relator columns."""
        v = list(vector)
        for row, column in self.pivots:
            if v[row] % column[row]:
                return False
            factor = v[row] // column[row]
            v = [a - factor * b for a, b in zip(v, column)]
        return not any(v)

    def same_image(self, w1: Word, w2: Word) -> bool:
        """Check whether w1 and w2 agree in the abelianization."""
        return self.contains([a - b for a, b in zip(self.image(w1), self.image(w2))])


class GenericModel:
    """Bounded rewriting with the symmetrized relators; refutes only through the abelianization."""

    name = ModelName.GENERIC

    def __init__(self, presentation: Presentation, node_cap: int = REWRITE_NODE_CAP):
        self.presentation = presentation
        self.alphabet = presentation.alphabet
        self.sym = symmetrize(presentation)
        self.lattice = AbelianLattice(presentation)
        self.node_cap = node_cap

    def check_word(self, w: Word) -> None:
        """Raise ModelMismatch when w has letters outside the presentation alphabet."""
        stray = sorted(set(w) - set(self.alphabet))
        if stray:
            raise ModelMismatch(f"letters {''.join(stray)} are not in the presentation")

    @staticmethod
    def _canonical(w: Word) -> Word:
        core, _ = cyclic_reduce(w)
        return min(rotations(core))

    def is_trivial(self, w: Word, rewrite_cap: int) -> bool:
        """
        Search for a derivation of the empty word from w.

        Words are handled as cyclic words: any cyclic conjugate of w is trivial exactly when w is. A move replaces
        a prefix u of some rotation by z^-1 where u z is a symmetrized relator.
        """
        start = self._canonical(w)
        if not start:
            return True
        max_length = len(start) + rewrite_cap
        seen = {start}
        queue = deque([start])
        while queue and len(seen) < self.node_cap:
            word = queue.popleft()
            for rotation in set(rotations(word)):
                for k in range(1, len(rotation) + 1):
                    prefix = rotation[:k]
                    if not self.sym.is_prefix(prefix):
                        break
                    for r in self.sym.with_prefix(prefix):
                        candidate = self._canonical(inverse(r[k:]) + rotation[k:])
                        if not candidate:
                            _LOG.debug("Rewriting reached the identity after %d words", len(seen))
                            return True
                        if len(candidate) <= max_length and candidate not in seen:
                            seen.add(candidate)
                            queue.append(candidate)
        _LOG.debug("Rewriting gave up after %d words", len(seen))
        return False


ReferenceModel = GroupModel | GenericModel

BUILTIN_MODELS: dict[ModelName, type[GroupModel]] = {
    ModelName.Z2: Z2Commutator,
    ModelName.KLEIN: KleinBottle,
    ModelName.HEX: HexZ2,
    ModelName.FREETRI: FreeTriangle,
}


def select_model(name: ModelName | str, presentation: Presentation) -> ReferenceModel:
    """
    Pick the oracle model for a presentation.

    :param name: a model name, auto matches the presentation against the built in models
    :param presentation: the presentation the model must realize
    :raises ModelMismatch: when a named built in model does not realize the presentation
    """
    name = ModelName(name)
    if name == ModelName.GENERIC:
        return GenericModel(presentation)
    if name == ModelName.AUTO:
        for cls in BUILTIN_MODELS.values():
            model = cls()
            if model.matches(presentation):
                _LOG.debug("Selected the %s model", model.name)
                return model
        _LOG.debug("No built in model matches, using generic rewriting")
        return GenericModel(presentation)
    model = BUILTIN_MODELS[name]()
    if not model.matches(presentation):
        raise ModelMismatch(f"the {name} model does not realize this presentation")
    return model


def oracle_equal(w1: Word, w2: Word, model: ReferenceModel, bound: int = DEFAULT_REWRITE_CAP) -> EqVerdict:
    """
    Decide whether w1 and w2 represent the same element.

    Reference models answer exactly. The generic model answers Equal when rewriting within the length bound
    reaches the identity, Distinct only when the abelianization separates the words.
    """
    model.check_word(w1)
    model.check_word(w2)
    if isinstance(model, GroupModel):
        return EqVerdict(Verdict.EQUAL if model.evaluate(w1) == model.evaluate(w2) else Verdict.DISTINCT)
    if not model.lattice.same_image(w1, w2):
        return EqVerdict(Verdict.DISTINCT)
    if model.is_trivial(w1 + inverse(w2), bound):
        return EqVerdict(Verdict.EQUAL)
    return EqVerdict(Verdict.INCONCLUSIVE, bound)


def oracle_conjugate(w1: Word, w2: Word, model: ReferenceModel) -> EqVerdict:
    """Decide conjugacy with the class key of a reference model; generic models refute by abelianization only."""
    model.check_word(w1)
    model.check_word(w2)
    if isinstance(model, GroupModel):
        same = model.class_key(model.evaluate(w1)) == model.class_key(model.evaluate(w2))
        return EqVerdict(Verdict.EQUAL if same else Verdict.DISTINCT)
    if not model.lattice.same_image(w1, w2):
        return EqVerdict(Verdict.DISTINCT)
    return EqVerdict(Verdict.INCONCLUSIVE)


def _exact(model: ReferenceModel, operation: str) -> GroupModel:
    if not isinstance(model, GroupModel):
        raise OracleError(f"{operation} needs a reference model, the generic model only rewrites")
    return model


def oracle_distance(
    w: Word, model: ReferenceModel, radius_cap: int = DEFAULT_RADIUS, ball_cap: int = DEFAULT_BALL_CAP
) -> int | None:
    """Word length of w by breadth first search, None when beyond radius_cap."""
    exact = _exact(model, "distance")
    return exact.distance(exact.evaluate(w), radius_cap, ball_cap)


def cayley_ball(model: ReferenceModel, radius: int, ball_cap: int = DEFAULT_BALL_CAP) -> CayleyBall:
    """Complete table of the elements within radius."""
    if radius < 0:
        raise InvalidArgument(f"radius must be nonnegative, got {radius}")
    return _exact(model, "ball").ball(radius, ball_cap)


def tau_estimate(
    w: Word, model: ReferenceModel, kmax: int, radius_cap: int | None = None, ball_cap: int = DEFAULT_BALL_CAP
) -> Fraction:
    """
    Upper estimate |w^kmax| / kmax of the translation number.

    :raises CapExceeded: when the power lies beyond the feasible radius
    """
    if kmax < 1:
        raise InvalidArgument(f"kmax must be at least 1, got {kmax}")
    radius = radius_cap if radius_cap is not None else max(len(w) * kmax, 1)
    d = oracle_distance(w * kmax, model, radius, ball_cap)
    if d is None:
        raise CapExceeded(f"{w}^{kmax} lies beyond radius {radius}")
    return Fraction(d, kmax)
