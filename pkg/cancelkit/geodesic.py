"""
Bad subwords, geodesity, length reduction and the automaton of geodesic words.

A bad subword is the outer boundary of a strip of 2-cells (squares for C''(4)-T(4), triangles for C''(3)-T(6))
whose inner boundary is shorter. A freely reduced word is geodesic exactly when it contains no bad subword.

The scanner reads a word letter by letter and keeps the set of partial strips (frontiers) that are still alive.
Square frontiers are the two letter prefix of the next cell; triangle frontiers carry the pending junction letter.

:copyright: (c) 2024 by the cancelkit authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

import logging
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass
from enum import StrEnum
from typing import Any, Iterator, NamedTuple

import numpy as np

from cancelkit.cancel import ConditionReport, check_conditions, half_relator, three_quarter, two_thirds
from cancelkit.const import Classification
from cancelkit.core import (
    AlphabetError,
    Letter,
    Presentation,
    SymmetrizedSet,
    UnsupportedPresentation,
    Word,
    free_reduce,
    inverse,
    inverse_letter,
    is_freely_reduced,
    symmetrize,
)

_LOG = logging.getLogger(__name__)

State = tuple[str, str]


class GeometryKind(StrEnum):
    """Shape of the 2-cells of a C'' presentation."""

    SQUARE = "Square"
    TRIANGLE = "Triangle"

    @property
    def drop(self) -> int:
        """Length lost by one strip replacement."""
        return 2 if self is GeometryKind.SQUARE else 1

    @classmethod
    def of(cls, report: ConditionReport) -> "GeometryKind":
        """Geometry of a classified presentation, UnsupportedPresentation outside the C'' classes."""
        if report.classification == Classification.CPP4T4:
            return cls.SQUARE
        if report.classification == Classification.CPP3T6:
            return cls.TRIANGLE
        raise UnsupportedPresentation(
            f"presentation is classified {report.classification}, only Cpp4T4 and Cpp3T6 are supported"
        )


class Step(NamedTuple):
    """One cell of a strip: the relator, the junction shared with the next cell and the inner letters."""

    cell: Word
    junction: Letter | None
    inner: Word


@dataclass(frozen=True)
class StripCertificate:
    """Witness that outer, found at start, equals the shorter replacement."""

    kind: GeometryKind
    start: int
    outer: Word
    cells: tuple[Word, ...]
    junctions: tuple[Letter, ...]
    replacement: Word

    @property
    def end(self) -> int:
        """Index one past the outer subword."""
        return self.start + len(self.outer)

    def apply(self, w: Word) -> Word:
        """Replace the outer subword of w and freely reduce."""
        return free_reduce(w[: self.start] + self.replacement + w[self.end :])

    def verify(self, s: SymmetrizedSet) -> bool:
        """Re-check the strip equations letter by letter against the symmetrized set."""
        m = len(self.cells)
        if not self.outer or not is_freely_reduced(self.outer) or len(self.junctions) != max(m - 1, 0):
            return False
        if any(cell not in s for cell in self.cells):
            return False
        if len(self.replacement) != len(self.outer) - self.kind.drop:
            return False
        if self.kind is GeometryKind.SQUARE:
            return self._verify_square()
        return self._verify_triangle()

    def _verify_square(self) -> bool:
        cells, j, outer = self.cells, self.junctions, self.outer
        m = len(cells)
        if any(len(cell) != 4 for cell in cells) or len(outer) != m + 2:
            return False
        if m == 1:
            expected = [outer]
        else:
            expected = [outer[:2] + j[0]]
            expected.extend(inverse_letter(j[t - 1]) + outer[t + 1] + j[t] for t in range(1, m - 1))
            expected.append(inverse_letter(j[m - 2]) + outer[m:])
        if any(cell[:3] != prefix for cell, prefix in zip(cells, expected)):
            return False
        return self.replacement == "".join(inverse(cell[3:]) for cell in cells)

    def _verify_triangle(self) -> bool:
        cells, j, outer = self.cells, self.junctions, self.outer
        m = len(cells)
        if any(len(cell) != 3 for cell in cells) or m % 2 == 0 or len(outer) != (m + 3) // 2:
            return False
        if m == 1:
            return cells[0][:2] == outer and self.replacement == inverse(cells[0][2:])
        inner: list[Word] = []
        if cells[0][:2] != outer[0] + j[0]:
            return False
        inner.append(cells[0][2:])
        pos = 1
        for t in range(1, m - 1):
            if t % 2 == 1:
                if cells[t] != inverse_letter(j[t - 1]) + outer[pos] + j[t]:
                    return False
                pos += 1
            else:
                if cells[t][:2] != inverse_letter(j[t - 1]) + j[t]:
                    return False
                inner.append(cells[t][2:])
        if cells[-1][:2] != inverse_letter(j[-1]) + outer[pos]:
            return False
        inner.append(cells[-1][2:])
        return self.replacement == "".join(inverse(s) for s in inner)

    def to_dict(self) -> dict[str, Any]:
        """Json form."""
        return {
            "kind": str(self.kind),
            "start": self.start,
            "outer": self.outer,
            "cells": list(self.cells),
            "junctions": list(self.junctions),
            "replacement": self.replacement,
        }


class Scanner(ABC):
    """Strip grammar of one geometry over a symmetrized set."""

    kind: GeometryKind

    def __init__(self, presentation: Presentation, sym: SymmetrizedSet, report: ConditionReport):
        self.presentation = presentation
        self.sym = sym
        self.report = report

    @property
    def alphabet(self) -> tuple[Letter, ...]:
        """Letters scanned."""
        return self.presentation.alphabet

    @abstractmethod
    def openings(self, x: Letter) -> list[tuple[State, tuple[Step, ...]]]:
        """Frontiers started by reading x."""

    @abstractmethod
    def advance(self, state: State, y: Letter) -> list[tuple[State, tuple[Step, ...]]]:
        """Frontiers reached from state by reading y."""

    @abstractmethod
    def closure(self, state: State, y: Letter) -> tuple[Step, ...] | None:
        """Final cell completing a strip when y is read in state."""


class SquareScanner(Scanner):
    """
    Square strips.

    The opening cell starts with two outer letters, middle cells carry one, the closing cell two. A single cell
    strip is a 3/4-relator. All two letter prefixes are unique, so frontiers never branch.
    """

    kind = GeometryKind.SQUARE

    def openings(self, x: Letter) -> list[tuple[State, tuple[Step, ...]]]:
        return [(("P", x), ())] if self.sym.is_prefix(x) else []

    def advance(self, state: State, y: Letter) -> list[tuple[State, tuple[Step, ...]]]:
        prefix = state[1]
        if len(prefix) == 1:
            return [(("P", prefix + y), ())] if half_relator(prefix + y, self.sym) else []
        moves = []
        for r in self.sym.with_prefix(prefix):
            nxt = inverse_letter(r[2]) + y
            if half_relator(nxt, self.sym):
                moves.append((("P", nxt), (Step(r, r[2], r[3:]),)))
        return moves

    def closure(self, state: State, y: Letter) -> tuple[Step, ...] | None:
        prefix = state[1]
        if len(prefix) != 2:
            return None
        members = three_quarter(prefix + y, self.sym)
        return (Step(members[0], None, members[0][3:]),) if members else None


class TriangleScanner(Scanner):
    """
    Triangle strips.

    End cells carry one outer and one inner letter, interior cells alternate between outer only and inner only,
    starting and ending with outer only. A single cell strip is a 2/3-relator. Openings and inner only cells
    branch since only their first letter is fixed.
    """

    kind = GeometryKind.TRIANGLE

    def openings(self, x: Letter) -> list[tuple[State, tuple[Step, ...]]]:
        moves: list[tuple[State, tuple[Step, ...]]] = [(("M1", x), ())]
        for r in self.sym.with_prefix(x):
            moves.append((("O", inverse_letter(r[1])), (Step(r, r[1], r[2:]),)))
        return moves

    def _outer_cell(self, junction: Letter, y: Letter) -> list[tuple[State, Step]]:
        return [(("C", inverse_letter(r[2])), Step(r, r[2], "")) for r in self.sym.with_prefix(junction + y)]

    def advance(self, state: State, y: Letter) -> list[tuple[State, tuple[Step, ...]]]:
        tag, junction = state
        if tag == "O":
            return [(nxt, (step,)) for nxt, step in self._outer_cell(junction, y)]
        if tag == "C":
            moves = []
            for r in self.sym.with_prefix(junction):
                inner_step = Step(r, r[1], r[2:])
                for nxt, step in self._outer_cell(inverse_letter(r[1]), y):
                    moves.append((nxt, (inner_step, step)))
            return moves
        return []

    def closure(self, state: State, y: Letter) -> tuple[Step, ...] | None:
        tag, junction = state
        if tag == "O":
            return None
        members = two_thirds(junction + y, self.sym)
        return (Step(members[0], None, members[0][2:]),) if members else None


def make_scanner(presentation: Presentation, report: ConditionReport | None = None) -> Scanner:
    """
    Build the scanner of a C''(4)-T(4) or C''(3)-T(6) presentation.

    :raises UnsupportedPresentation: for any other classification
    """
    report = report or check_conditions(presentation)
    kind = GeometryKind.of(report)
    sym = symmetrize(presentation)
    if kind is GeometryKind.SQUARE:
        return SquareScanner(presentation, sym, report)
    return TriangleScanner(presentation, sym, report)


def _certificate(ctx: Scanner, w: Word, start: int, end: int, steps: list[Step]) -> StripCertificate:
    return StripCertificate(
        kind=ctx.kind,
        start=start,
        outer=w[start : end + 1],
        cells=tuple(step.cell for step in steps),
        junctions=tuple(step.junction for step in steps if step.junction is not None),
        replacement="".join(inverse(step.inner) for step in steps),
    )


def find_bad_subword(w: Word, ctx: Scanner, starts: int | None = None) -> StripCertificate | None:
    """
    Find the leftmost, then shortest, bad subword of w.

    :param w: a freely reduced word
    :param ctx: the scanner of the presentation
    :param starts: only consider subwords starting before this index
    :return: the certificate, None when w has no bad subword
    """
    limit = len(w) if starts is None else min(starts, len(w))
    for start in range(limit):
        layers: list[dict[State, tuple[State | None, tuple[Step, ...]]]] = [{}]
        for state, steps in ctx.openings(w[start]):
            layers[0].setdefault(state, (None, steps))
        for end in range(start + 1, len(w)):
            y = w[end]
            layer = layers[-1]
            for state in sorted(layer):
                closing = ctx.closure(state, y)
                if closing is None:
                    continue
                chain = list(closing)
                k, current = len(layers) - 1, state
                while current is not None:
                    previous, steps = layers[k][current]
                    chain[:0] = steps
                    current, k = previous, k - 1
                return _certificate(ctx, w, start, end, chain)
            nxt: dict[State, tuple[State | None, tuple[Step, ...]]] = {}
            for state in sorted(layer):
                for new_state, steps in ctx.advance(state, y):
                    nxt.setdefault(new_state, (state, steps))
            if not nxt:
                break
            layers.append(nxt)
    return None


def is_geodesic(w: Word, ctx: Scanner) -> bool:
    """Check that w is freely reduced and has no bad subword."""
    return is_freely_reduced(w) and find_bad_subword(w, ctx) is None


def reduce_to_geodesic(w: Word, ctx: Scanner) -> tuple[Word, list[StripCertificate]]:
    """
    Rewrite w into a geodesic word for the same element.

    Every step replaces the leftmost shortest bad subword and freely reduces, so the length strictly drops.

    :return: the geodesic and the applied certificates in order
    """
    current = free_reduce(w)
    trail: list[StripCertificate] = []
    while (cert := find_bad_subword(current, ctx)) is not None:
        trail.append(cert)
        current = cert.apply(current)
    _LOG.debug("Reduced %s to %s in %d steps", w, current, len(trail))
    return current, trail


@dataclass(frozen=True)
class GrowthCount:
    """Number of accepted words of each length."""

    counts: tuple[int, ...]

    def to_dict(self) -> dict[str, Any]:
        """Json form."""
        return {"counts": list(self.counts)}


@dataclass(frozen=True)
class GeodesicDFA:
    """Minimal complete automaton of the geodesic words, every state except dead accepting."""

    alphabet: tuple[Letter, ...]
    transitions: tuple[tuple[int, ...], ...]
    start: int
    dead: int

    @property
    def num_states(self) -> int:
        """Number of states, dead included."""
        return len(self.transitions)

    def step(self, state: int, x: Letter) -> int:
        """Transition on one letter."""
        try:
            column = self.alphabet.index(x)
        except ValueError as ex:
            raise AlphabetError(f"letter {x} is not in the automaton alphabet") from ex
        return self.transitions[state][column]

    def run(self, w: Word) -> int:
        """State reached after reading w from the start state."""
        state = self.start
        for x in w:
            state = self.step(state, x)
            if state == self.dead:
                break
        return state

    def accepts(self, w: Word) -> bool:
        """Check whether w is accepted."""
        return self.run(w) != self.dead

    def words(self, max_len: int) -> Iterator[Word]:
        """Accepted words up to max_len, by length then in alphabet order."""
        layer = [("", self.start)]
        for length in range(max_len + 1):
            for w, _ in layer:
                yield w
            if length == max_len:
                break
            layer = [
                (w + x, target)
                for w, state in layer
                for x, target in zip(self.alphabet, self.transitions[state])
                if target != self.dead
            ]

    def to_dot(self) -> str:
        """Graphviz form, dead state omitted."""
        lines = ["digraph geodesics {", "  rankdir=LR;", '  init [shape=point, label=""];', f"  init -> {self.start};"]
        for state in range(self.num_states):
            if state != self.dead:
                lines.append(f"  {state} [shape=doublecircle];")
        for state, row in enumerate(self.transitions):
            if state == self.dead:
                continue
            for x, target in zip(self.alphabet, row):
                if target != self.dead:
                    lines.append(f'  {state} -> {target} [label="{x}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_tsv(self) -> str:
        """One state, letter, next state triple per line."""
        return "".join(
            f"{state}\t{x}\t{target}\n"
            for state, row in enumerate(self.transitions)
            for x, target in zip(self.alphabet, row)
        )

    def to_dict(self) -> dict[str, Any]:
        """Json form."""
        return {
            "alphabet": list(self.alphabet),
            "start": self.start,
            "dead": self.dead,
            "transitions": [list(row) for row in self.transitions],
        }


_DEAD = ("dead",)


def _scanner_automaton(ctx: Scanner) -> tuple[list[Any], list[list[int]]]:
    alphabet = ctx.alphabet
    start = (None, frozenset())
    states: list[Any] = [start, _DEAD]
    index: dict[Any, int] = {start: 0, _DEAD: 1}
    rows: list[list[int]] = [[], [1] * len(alphabet)]
    queue = deque([start])
    while queue:
        last, frontier = current = queue.popleft()
        row = []
        for y in alphabet:
            if (last is not None and y == inverse_letter(last)) or any(ctx.closure(s, y) for s in frontier):
                row.append(1)
                continue
            reached = {new for s in frontier for new, _ in ctx.advance(s, y)}
            reached.update(new for new, _ in ctx.openings(y))
            target = (y, frozenset(reached))
            if target not in index:
                index[target] = len(states)
                states.append(target)
                rows.append([])
                queue.append(target)
            row.append(index[target])
        rows[index[current]] = row
    return states, rows


def _minimize(rows: list[list[int]], dead: int) -> tuple[tuple[tuple[int, ...], ...], int, int]:
    block = [1 if state == dead else 0 for state in range(len(rows))]
    count = len(set(block))
    while True:
        signatures: dict[tuple[int, ...], int] = {}
        refined = []
        for state, row in enumerate(rows):
            signature = (block[state], *(block[t] for t in row))
            refined.append(signatures.setdefault(signature, len(signatures)))
        block = refined
        if len(signatures) == count:
            break
        count = len(signatures)

    # canonical names in breadth first order from the start state
    names = {block[0]: 0}
    order = [block[0]]
    representative = {}
    for state, b in enumerate(block):
        representative.setdefault(b, state)
    queue = deque([block[0]])
    while queue:
        b = queue.popleft()
        for target in rows[representative[b]]:
            tb = block[target]
            if tb not in names:
                names[tb] = len(names)
                order.append(tb)
                queue.append(tb)
    transitions = tuple(tuple(names[block[t]] for t in rows[representative[b]]) for b in order)
    return transitions, 0, names[block[dead]]


def build_geodesic_dfa(ctx: Scanner) -> GeodesicDFA:
    """
    Build the minimal automaton accepting exactly the geodesic words.

    Scanner states are the last letter read and the set of live frontiers. Reading the inverse of the last
    letter or completing a strip leads to the dead state. The subset automaton is minimized by partition
    refinement.
    """
    states, rows = _scanner_automaton(ctx)
    transitions, start, dead = _minimize(rows, 1)
    _LOG.debug("Geodesic automaton: %d scanner states, %d minimal states", len(states), len(transitions))
    return GeodesicDFA(ctx.alphabet, transitions, start, dead)


def count_geodesics(dfa: GeodesicDFA, k: int) -> GrowthCount:
    """
    Count accepted words of every length up to k with the transfer matrix of the live states.

    :param dfa: the geodesic automaton
    :param k: longest length counted
    """
    n = dfa.num_states
    matrix = np.zeros((n, n), dtype=object)
    for state, row in enumerate(dfa.transitions):
        if state == dfa.dead:
            continue
        for target in row:
            if target != dfa.dead:
                matrix[state, target] += 1
    vector = np.zeros(n, dtype=object)
    vector[dfa.start] = 1
    counts = [1]
    for _ in range(k):
        vector = vector.dot(matrix)
        counts.append(int(vector.sum()))
    return GrowthCount(tuple(counts))
