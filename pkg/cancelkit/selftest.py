"""
Batch harness checking the scanner, the automaton and the conjugacy layer against the oracle.

Every case result is published on a pyee event emitter, the command line front end listens and logs.

:copyright: (c) 2024 by the cancelkit authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain
from typing import Any, Callable, Iterator

from pyee.base import EventEmitter

from cancelkit.conjtrans import (
    Answer,
    GroupContext,
    is_torsion_free_upto,
    nth_root,
    shortest_class_rep,
    translation_number,
)
from cancelkit.const import DEFAULT_SEED, SELFTEST_LENGTH, SELFTEST_SAMPLES, Events
from cancelkit.core import CapExceeded, Word, freely_reduced_words, inverse, random_reduced_word
from cancelkit.geodesic import find_bad_subword, is_geodesic, reduce_to_geodesic
from cancelkit.oracle import GenericModel, Verdict, oracle_distance, oracle_equal, tau_estimate

_LOG = logging.getLogger(__name__)

# (case label, passed, detail)
Case = tuple[str, bool, str]


@dataclass
class SuiteReport:
    """Outcome of one suite."""

    suite: str
    passed: int = 0
    failed: int = 0
    skipped: bool = False
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True when no case failed."""
        return self.failed == 0

    def to_dict(self) -> dict[str, Any]:
        """Json form."""
        return {
            "suite": self.suite,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "failures": self.failures,
        }


@dataclass
class SelftestReport:
    """Outcome of a selftest run."""

    suites: list[SuiteReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True when every suite passed."""
        return all(suite.ok for suite in self.suites)

    def to_dict(self) -> dict[str, Any]:
        """Json form."""
        return {"ok": self.ok, "suites": [suite.to_dict() for suite in self.suites]}


class SelfTest:
    """Runs the property and oracle suites of one presentation."""

    MAX_FAILURES_KEPT = 10
    # suites that skip some draws stop after this many draws per requested case
    DRAW_FACTOR = 20

    def __init__(
        self,
        ctx: GroupContext,
        length: int = SELFTEST_LENGTH,
        seed: int = DEFAULT_SEED,
        samples: int = SELFTEST_SAMPLES,
    ):
        """
        Create a harness.

        :param ctx: the presentation context
        :param length: longest word enumerated exhaustively
        :param seed: seed of the random word generator
        :param samples: random cases per suite
        """
        self.ctx = ctx
        self.length = length
        self.seed = seed
        self.samples = samples
        self.events = EventEmitter()
        self.suites: dict[str, Callable[[], Iterator[Case]]] = {
            "geodesic-oracle": self._geodesic_oracle,
            "dfa-scanner": self._dfa_scanner,
            "certificates": self._certificates,
            "reduce-length": self._reduce_length,
            "tau-homogeneity": self._tau_homogeneity,
            "tau-invariance": self._tau_invariance,
            "tau-slope": self._tau_slope,
            "root-replay": self._root_replay,
            "torsion": self._torsion,
            "model-soundness": self._model_soundness,
        }
        self._oracle_suites = {"geodesic-oracle", "reduce-length", "tau-slope", "model-soundness"}

    def run(self, names: list[str] | None = None) -> SelftestReport:
        """Run the named suites, all by default, in registration order."""
        names = [name for name in self.suites if names is None or name in names]
        self.events.emit(Events.STARTED, names)
        report = SelftestReport()
        for name in names:
            suite = SuiteReport(name)
            if name in self._oracle_suites and self.ctx.model is None:
                _LOG.warning("Suite %s skipped: no reference model for this presentation", name)
                suite.skipped = True
            else:
                for label, passed, detail in self.suites[name]():
                    if passed:
                        suite.passed += 1
                        self.events.emit(Events.CASE_PASSED, name, label)
                    else:
                        suite.failed += 1
                        if len(suite.failures) < self.MAX_FAILURES_KEPT:
                            suite.failures.append(f"{label}: {detail}")
                        self.events.emit(Events.CASE_FAILED, name, label, detail)
            report.suites.append(suite)
            self.events.emit(Events.SUITE_DONE, suite)
        self.events.emit(Events.FINISHED, report)
        return report

    def _rng(self, suite: str) -> random.Random:
        # one stream per suite so suites can be run alone with identical cases
        return random.Random(f"{self.seed}:{suite}")

    def _random_words(self, suite: str, max_len: int, count: int | None = None) -> Iterator[Word]:
        rng = self._rng(suite)
        for _ in range(self.samples if count is None else count):
            yield random_reduced_word(rng, self.ctx.alphabet, rng.randint(0, max_len))

    def _all_words(self, max_len: int) -> Iterator[Word]:
        return chain.from_iterable(freely_reduced_words(self.ctx.alphabet, n) for n in range(max_len + 1))

    def _geodesic_oracle(self) -> Iterator[Case]:
        for w in self._all_words(self.length):
            d = self._distance(w, len(w))
            if d is None:
                continue
            scanner = is_geodesic(w, self.ctx.scanner)
            yield w, scanner == (d == len(w)), f"scanner {scanner}, oracle distance {d}"

    def _dfa_scanner(self) -> Iterator[Case]:
        dfa = self.ctx.dfa
        words = chain(self._all_words(min(self.length, 8)), self._random_words("dfa-scanner", 14))
        for w in words:
            accepted = dfa.accepts(w)
            yield w, accepted == is_geodesic(w, self.ctx.scanner), f"automaton {accepted}"

    def _certificates(self) -> Iterator[Case]:
        checked = 0
        for w in self._random_words("certificates", 12, self.DRAW_FACTOR * self.samples):
            if checked == self.samples:
                break
            cert = find_bad_subword(w, self.ctx.scanner)
            if cert is None:
                continue
            checked += 1
            if not cert.verify(self.ctx.sym):
                yield w, False, f"certificate {cert.to_dict()} fails its equations"
            elif self.ctx.model is not None:
                verdict = oracle_equal(cert.outer, cert.replacement, self.ctx.model).verdict
                yield w, verdict == Verdict.EQUAL, f"{cert.outer} -> {cert.replacement}: {verdict}"
            else:
                bound = self.ctx.bounds.rewrite_cap
                verdict = oracle_equal(cert.outer, cert.replacement, self.ctx.oracle, bound).verdict
                yield w, verdict != Verdict.DISTINCT, f"{cert.outer} -> {cert.replacement}: {verdict}"

    def _distance(self, w: Word, radius: int) -> int | None:
        try:
            return oracle_distance(w, self.ctx.model, radius, self.ctx.bounds.ball_cap)
        except CapExceeded:
            _LOG.debug("Oracle ball too large for %s", w)
            return None

    def _reduce_length(self) -> Iterator[Case]:
        for w in self._random_words("reduce-length", 2 * self.length):
            geodesic, _ = reduce_to_geodesic(w, self.ctx.scanner)
            d = self._distance(w, len(w))
            if d is None:
                continue
            same = oracle_equal(w, geodesic, self.ctx.model).verdict == Verdict.EQUAL
            yield w, same and len(geodesic) == d, f"reduced to {geodesic}, oracle distance {d}"

    def _tau_homogeneity(self) -> Iterator[Case]:
        for w in self._random_words("tau-homogeneity", 4):
            tau = translation_number(w, self.ctx)
            for k in range(2, 5):
                power = translation_number(w * k, self.ctx)
                yield f"{w}^{k}", power.twice == k * tau.twice, f"tau {power} against {k} * {tau}"

    def _tau_invariance(self) -> Iterator[Case]:
        rng = self._rng("tau-invariance-conjugators")
        for w in self._random_words("tau-invariance", 5):
            tau = translation_number(w, self.ctx)
            h = random_reduced_word(rng, self.ctx.alphabet, rng.randint(1, 3))
            inverse_tau = translation_number(inverse(w), self.ctx)
            conjugate_tau = translation_number(h + w + inverse(h), self.ctx)
            yield w, tau == inverse_tau == conjugate_tau, f"tau {tau}, inverse {inverse_tau}, conjugate {conjugate_tau}"

    def _tau_slope(self) -> Iterator[Case]:
        kmax = 8
        for w in self._all_words(min(self.length, 4)):
            tau = translation_number(w, self.ctx)
            u = shortest_class_rep(w, self.ctx).rep
            try:
                slope = tau_estimate(u, self.ctx.model, kmax, ball_cap=self.ctx.bounds.ball_cap)
            except CapExceeded:
                _LOG.debug("Oracle ball too large for %s^%d", u, kmax)
                continue
            yield w, tau.value <= slope <= tau.value + Fraction(1, kmax), f"tau {tau}, oracle slope {slope}"

    def _root_replay(self) -> Iterator[Case]:
        rng = self._rng("root-replay-degrees")
        checked = 0
        for w in self._random_words("root-replay", 4, self.DRAW_FACTOR * self.samples):
            if checked == self.samples:
                break
            n = rng.randint(2, 3)
            target = w * n if rng.random() < 0.5 else w
            answer = nth_root(target, n, self.ctx)
            if answer.verdict != Answer.YES:
                continue
            checked += 1
            replay = inverse(answer.conjugator) + answer.witness * n + answer.conjugator
            yield f"{target} n={n}", self.ctx.equal(replay, target), f"witness {answer.witness}"

    def _torsion(self) -> Iterator[Case]:
        for w in self._all_words(min(self.length, 6)):
            yield w, is_torsion_free_upto(w, self.ctx), "a power is the identity"

    def _model_soundness(self) -> Iterator[Case]:
        model = self.ctx.model
        for r in self.ctx.presentation.relators:
            yield f"relator {r}", model.evaluate(r) == model.identity, "relator is not the identity"
        rng = self._rng("model-soundness")
        for _ in range(self.samples):
            g, h, k = (model.evaluate(random_reduced_word(rng, model.alphabet, rng.randint(0, 8))) for _ in range(3))
            left = model.multiply(model.multiply(g, h), k)
            right = model.multiply(g, model.multiply(h, k))
            yield f"associativity {g} {h} {k}", left == right, f"{left} != {right}"
        ball = model.ball(min(self.ctx.bounds.radius, self.length), self.ctx.bounds.ball_cap)
        for g, d in ball.table.items():
            norm = model.norm(g)
            inverse_d = model.distance(model.invert(g), ball.radius, self.ctx.bounds.ball_cap)
            yield (
                f"distance {ball.labels[g]}",
                (norm is None or norm == d) and inverse_d == d,
                f"ball {d}, closed form {norm}, inverse {inverse_d}",
            )
        rewriting = GenericModel(self.ctx.presentation)
        rng = self._rng("model-soundness-rewriting")
        for _ in range(max(self.samples // 10, 1)):
            w1 = random_reduced_word(rng, model.alphabet, rng.randint(0, 5))
            if rng.random() < 0.5:
                w2 = self.ctx.reduce(w1)
            else:
                w2 = random_reduced_word(rng, model.alphabet, rng.randint(0, 5))
            exact = oracle_equal(w1, w2, model).verdict
            bounded = oracle_equal(w1, w2, rewriting, self.ctx.bounds.rewrite_cap).verdict
            agree = bounded in (exact, Verdict.INCONCLUSIVE)
            yield f"rewriting {w1} {w2}", agree, f"rewriting {bounded}, model {exact}"
