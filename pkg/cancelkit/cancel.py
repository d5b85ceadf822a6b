"""
Pieces and the C(p), T(q), P and C''(p) small cancellation conditions.

:copyright: (c) 2024 by the cancelkit authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any

import networkx as nx

from cancelkit.const import DISPLAY_CAP, UNBOUNDED, Classification
from cancelkit.core import (
    InvalidArgument,
    Presentation,
    SymmetrizedSet,
    Word,
    inverse,
    inverse_letter,
    is_proper_power,
    symmetrize,
)

_LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class PieceIndex:
    """Common prefixes of distinct symmetrized relators."""

    pieces: frozenset[Word]
    max_piece_length: int


@dataclass
class ConditionReport:
    """Largest p and q with C(p) and T(q), the P condition and the resulting classification."""

    c_max: float
    t_max: float
    p_holds: bool
    cpp: int | None
    classification: Classification
    witnesses: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        """Json form, unbounded exponents rendered as ">=64"."""
        return {
            "c_max": display_bound(self.c_max),
            "t_max": display_bound(self.t_max),
            "p_holds": self.p_holds,
            "cpp": self.cpp,
            "classification": str(self.classification),
            "witnesses": self.witnesses,
        }


def display_bound(value: float) -> int | str:
    """Render an exponent for reports."""
    if value == UNBOUNDED or value >= DISPLAY_CAP:
        return f">={DISPLAY_CAP}"
    return int(value)


def compute_pieces(s: SymmetrizedSet) -> PieceIndex:
    """Collect every nonempty word that is a prefix of at least two distinct members."""
    pieces = frozenset(prefix for prefix, members in s.prefix_index.items() if len(members) >= 2)
    return PieceIndex(pieces, max((len(u) for u in pieces), default=0))


def piece_factorization(r: Word, pieces: frozenset[Word]) -> list[Word] | None:
    """
    Shortest factorization of r into pieces.

    :param r: a symmetrized relator
    :param pieces: the piece set
    :return: the pieces in order, None when r is not a product of pieces
    """
    n = len(r)
    best: list[float] = [0] + [math.inf] * n
    back = [0] * (n + 1)
    for i in range(n):
        if best[i] == math.inf:
            continue
        for j in range(i + 1, n + 1):
            if r[i:j] in pieces and best[i] + 1 < best[j]:
                best[j] = best[i] + 1
                back[j] = i
    if best[n] == math.inf:
        return None
    factors: list[Word] = []
    j = n
    while j > 0:
        factors.append(r[back[j] : j])
        j = back[j]
    return factors[::-1]


def cancellation_graph(s: SymmetrizedSet) -> nx.DiGraph:
    """
    Directed graph on the members with an edge r -> r' when r r' cancels at the junction and r' is not r^-1.

    Every member starting with the inverse of the last letter of r is a candidate successor.
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(s.members)
    for r in s.members:
        for successor in s.with_prefix(inverse_letter(r[-1])):
            if successor != inverse(r):
                graph.add_edge(r, successor)
    return graph


def shortest_closed_walk(graph: nx.DiGraph, min_length: int = 3) -> list[Word] | None:
    """
    Shortest closed walk with at least min_length edges, vertices may repeat.

    :return: the walk r_1..r_k (r_k -> r_1 closes it), None when the graph has no such walk
    """
    best: list[Word] | None = None
    for source in graph.nodes:
        start = (source, 0)
        parents: dict[tuple[Word, int], tuple[Word, int] | None] = {start: None}
        queue = deque([(start, 0)])
        found = None
        while queue:
            (vertex, steps), length = queue.popleft()
            if best is not None and length + 1 >= len(best):
                break
            for successor in graph.successors(vertex):
                state = (successor, min(steps + 1, min_length))
                if state in parents:
                    continue
                parents[state] = (vertex, steps)
                if state == (source, min_length):
                    found = state
                    break
                queue.append((state, length + 1))
            if found:
                break
        if found:
            walk: list[Word] = []
            state = parents[found]
            while state is not None:
                walk.append(state[0])
                state = parents[state]
            walk.reverse()
            if best is None or len(walk) < len(best):
                best = walk
    return best


def check_conditions(p: Presentation) -> ConditionReport:
    """
    Compute the small cancellation exponents of a presentation.

    c_max is the least number of pieces any symmetrized relator factors into (unbounded when none factors),
    t_max the length of the shortest closed walk of length at least 3 in the cancellation graph.
    """
    s = symmetrize(p)
    index = compute_pieces(s)
    witnesses: dict[str, Any] = {}

    c_max: float = UNBOUNDED
    for r in s.members:
        factors = piece_factorization(r, index.pieces)
        if factors is not None and len(factors) < c_max:
            c_max = len(factors)
            witnesses["c"] = factors

    walk = shortest_closed_walk(cancellation_graph(s))
    t_max: float = UNBOUNDED
    if walk is not None:
        t_max = len(walk)
        witnesses["t"] = walk

    powers = [r for r in p.relators if is_proper_power(r)]
    long_pieces = sorted((u for u in index.pieces if len(u) > 1), key=lambda u: (-len(u), u))
    p_holds = not powers and not long_pieces
    if powers:
        witnesses["p"] = powers[0]
    elif long_pieces:
        witnesses["p"] = long_pieces[0]

    lengths = {len(r) for r in p.relators}
    cpp = None
    if p_holds and len(lengths) == 1 and c_max >= next(iter(lengths)):
        cpp = next(iter(lengths))

    classification = Classification.UNCLASSIFIED
    if cpp == 4 and t_max >= 4:
        classification = Classification.CPP4T4
    elif cpp == 3 and t_max >= 6:
        classification = Classification.CPP3T6
    elif p_holds and c_max >= 6:
        classification = Classification.C6P
    elif p_holds and c_max >= 4 and t_max >= 4:
        classification = Classification.C4T4P
    elif p_holds and c_max >= 3 and t_max >= 6:
        classification = Classification.C3T6P

    report = ConditionReport(c_max, t_max, p_holds, cpp, classification, witnesses)
    _LOG.debug("Conditions: %s", report.to_dict())
    return report


def pq_members(u: Word, p: int, q: int, s: SymmetrizedSet) -> tuple[Word, ...]:
    """Members r of s having u as a prefix with q * len(u) = p * len(r)."""
    if p <= 0 or q <= 0 or p >= q:
        raise InvalidArgument(f"expected 0 < p < q, got p={p} q={q}")
    return tuple(r for r in s.with_prefix(u) if q * len(u) == p * len(r))


def is_pq_relator(u: Word, p: int, q: int, s: SymmetrizedSet) -> bool:
    """Check whether u is the initial p/q of some symmetrized relator."""
    return bool(pq_members(u, p, q, s))


def half_relator(u: Word, s: SymmetrizedSet) -> tuple[Word, ...]:
    """Members of which u is the first half."""
    return pq_members(u, 1, 2, s)


def three_quarter(u: Word, s: SymmetrizedSet) -> tuple[Word, ...]:
    """Members of which u is the first three quarters."""
    return pq_members(u, 3, 4, s)


def two_thirds(u: Word, s: SymmetrizedSet) -> tuple[Word, ...]:
    """Members of which u is the first two thirds."""
    return pq_members(u, 2, 3, s)
