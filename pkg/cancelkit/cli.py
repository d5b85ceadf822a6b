#!/usr/bin/env python3
"""
Command line front end: presentation files in, JSON, TSV, DOT or text reports out.

:copyright: (c) 2024 by the cancelkit authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, Callable

from cancelkit.cancel import check_conditions
from cancelkit.config import Config, EnhancedJSONEncoder, default_output_format, load_bounds
from cancelkit.conjtrans import (
    Answer,
    GroupContext,
    HalfInteger,
    count_classes_by_tau,
    max_root,
    nth_root,
    power_conjugacy,
    shortest_class_rep,
    translation_number,
)
from cancelkit.const import (
    ENV_LOG_LEVEL,
    SELFTEST_LENGTH,
    SELFTEST_SAMPLES,
    DfaFormat,
    Events,
    ExitCodes,
    ModelName,
    OutputFormat,
    __version__,
)
from cancelkit.core import CancelKitError, InvalidArgument, Presentation, load_presentation
from cancelkit.geodesic import (
    build_geodesic_dfa,
    count_geodesics,
    find_bad_subword,
    is_geodesic,
    make_scanner,
    reduce_to_geodesic,
)
from cancelkit.oracle import cayley_ball, select_model
from cancelkit.selftest import SelfTest, SuiteReport

_LOG = logging.getLogger(__name__)

_LOGGERS = (
    "cancelkit.cancel",
    "cancelkit.cli",
    "cancelkit.config",
    "cancelkit.conjtrans",
    "cancelkit.core",
    "cancelkit.geodesic",
    "cancelkit.oracle",
    "cancelkit.selftest",
)

_POSITIONALS = ("word", "w1", "w2", "n", "k", "r")

_VERDICT_EXIT = {Answer.YES: ExitCodes.OK, Answer.NO: ExitCodes.NO, Answer.INCONCLUSIVE: ExitCodes.INCONCLUSIVE}


class _ArgumentParser(argparse.ArgumentParser):
    """Argument parser exiting with the usage error code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ExitCodes.USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], help="report format")
    common.add_argument("--model", choices=[m.value for m in ModelName], default=ModelName.AUTO.value)
    common.add_argument("--bound-conj", type=int, help="longest conjugator searched")
    common.add_argument("--radius", type=int, help="breadth first search radius cap")
    common.add_argument("--rewrite-cap", type=int, help="extra length allowed to generic rewriting")
    common.add_argument("--seed", type=int, help="seed of the randomized selftest suites")
    common.add_argument("--config", help="json file with search bounds")

    parser = _ArgumentParser(prog="cancelkit", description="Small cancellation group toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def command(name: str, help_text: str, *arguments: tuple[str, type]) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("file", help="presentation file")
        for argument, kind in arguments:
            sub.add_argument(argument, type=kind)
        return sub

    command("check", "small cancellation conditions")
    command("geodesic", "geodesity of a word", ("word", str))
    command("reduce", "geodesic form of a word", ("word", str))
    dfa = command("dfa", "automaton of the geodesic words")
    dfa.add_argument("--out", choices=[f.value for f in DfaFormat], default=DfaFormat.DOT.value)
    command("count", "number of geodesics of each length", ("k", int))
    command("class", "shortest conjugacy class representative", ("word", str))
    command("tau", "translation number", ("word", str))
    command("root", "n-th root", ("word", str), ("n", int))
    command("maxroot", "largest root", ("word", str))
    command("powconj", "conjugacy to a power", ("w1", str), ("w2", str))
    command("classes", "conjugacy classes with translation number at most r", ("r", str))
    command("ball", "Cayley ball of a reference model", ("r", int))
    selftest = command("selftest", "oracle and property suites")
    selftest.add_argument("--samples", type=int, default=SELFTEST_SAMPLES, help="random cases per suite")
    return parser


def parse_config(argv: list[str]) -> Config:
    """Turn the argument vector into a Config."""
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        bounds = load_bounds(args.config).override(
            conj=args.bound_conj, radius=args.radius, rewrite_cap=args.rewrite_cap
        )
    except InvalidArgument as ex:
        parser.error(str(ex))
    arguments = {name: getattr(args, name) for name in _POSITIONALS if hasattr(args, name)}
    if args.command == "selftest":
        arguments.update(samples=args.samples, length=args.radius if args.radius is not None else SELFTEST_LENGTH)
    config = Config(
        command=args.command,
        presentation_path=args.file,
        arguments=arguments,
        output=OutputFormat(args.format) if args.format else default_output_format(),
        dfa_format=DfaFormat(getattr(args, "out", DfaFormat.DOT.value)),
        model=ModelName(args.model),
        bounds=bounds,
    )
    if args.seed is not None:
        config.seed = args.seed
    return config


def _render(payload: Any, output: OutputFormat) -> str:
    if output == OutputFormat.JSON:
        return json.dumps(payload, cls=EnhancedJSONEncoder)
    data = payload.to_dict() if hasattr(payload, "to_dict") else payload
    if not isinstance(data, dict):
        return str(data)
    separator = "\t" if output == OutputFormat.TSV else ": "
    lines = []
    for key, value in data.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, cls=EnhancedJSONEncoder)
        lines.append(f"{key}{separator}{value}")
    return "\n".join(lines)


def _context(config: Config, presentation: Presentation) -> GroupContext:
    return GroupContext(presentation, config.bounds, config.model)


def _on_case_failed(suite: str, case: str, detail: str) -> None:
    _LOG.warning("[%s] %s failed: %s", suite, case, detail)


def _on_suite_done(report: SuiteReport) -> None:
    if report.skipped:
        _LOG.info("[%s] skipped", report.suite)
    else:
        _LOG.info("[%s] %d passed, %d failed", report.suite, report.passed, report.failed)


def _check(config: Config, presentation: Presentation) -> tuple[Any, int]:
    return check_conditions(presentation), ExitCodes.OK


def _geodesic(config: Config, presentation: Presentation) -> tuple[Any, int]:
    word = config.arguments["word"]
    presentation.check_word(word)
    scanner = make_scanner(presentation)
    geodesic = is_geodesic(word, scanner)
    cert = None if geodesic else find_bad_subword(word, scanner)
    return {"word": word, "geodesic": geodesic, "certificate": cert}, ExitCodes.OK if geodesic else ExitCodes.NO


def _reduce(config: Config, presentation: Presentation) -> tuple[Any, int]:
    word = config.arguments["word"]
    presentation.check_word(word)
    geodesic, trail = reduce_to_geodesic(word, make_scanner(presentation))
    return {"word": word, "geodesic": geodesic, "length": len(geodesic), "trail": trail}, ExitCodes.OK


def _dfa(config: Config, presentation: Presentation) -> tuple[Any, int]:
    dfa = build_geodesic_dfa(make_scanner(presentation))
    _LOG.info("Geodesic automaton with %d states", dfa.num_states)
    return (dfa.to_dot() if config.dfa_format == DfaFormat.DOT else dfa.to_tsv()), ExitCodes.OK


def _count(config: Config, presentation: Presentation) -> tuple[Any, int]:
    k = config.arguments["k"]
    if k < 0:
        raise InvalidArgument(f"length must be nonnegative, got {k}")
    return count_geodesics(build_geodesic_dfa(make_scanner(presentation)), k), ExitCodes.OK


def _class(config: Config, presentation: Presentation) -> tuple[Any, int]:
    return shortest_class_rep(config.arguments["word"], _context(config, presentation)), ExitCodes.OK


def _tau(config: Config, presentation: Presentation) -> tuple[Any, int]:
    return translation_number(config.arguments["word"], _context(config, presentation)), ExitCodes.OK


def _root(config: Config, presentation: Presentation) -> tuple[Any, int]:
    answer = nth_root(config.arguments["word"], config.arguments["n"], _context(config, presentation))
    return answer, _VERDICT_EXIT[answer.verdict]


def _maxroot(config: Config, presentation: Presentation) -> tuple[Any, int]:
    answer = max_root(config.arguments["word"], _context(config, presentation))
    return answer, _VERDICT_EXIT[answer.verdict]


def _powconj(config: Config, presentation: Presentation) -> tuple[Any, int]:
    answer = power_conjugacy(config.arguments["w1"], config.arguments["w2"], _context(config, presentation))
    return answer, _VERDICT_EXIT[answer.verdict]


def _classes(config: Config, presentation: Presentation) -> tuple[Any, int]:
    result = count_classes_by_tau(HalfInteger.parse(config.arguments["r"]), _context(config, presentation))
    return result, ExitCodes.INCONCLUSIVE if result.inconclusive else ExitCodes.OK


def _ball(config: Config, presentation: Presentation) -> tuple[Any, int]:
    ball = cayley_ball(select_model(config.model, presentation), config.arguments["r"], config.bounds.ball_cap)
    if config.output == OutputFormat.TSV:
        return ball.to_tsv(), ExitCodes.OK
    return ball, ExitCodes.OK


def _selftest(config: Config, presentation: Presentation) -> tuple[Any, int]:
    samples, length = config.arguments["samples"], config.arguments["length"]
    if samples <= 0:
        raise InvalidArgument(f"samples must be positive, got {samples}")
    harness = SelfTest(_context(config, presentation), length, config.seed, samples)
    harness.events.on(Events.CASE_FAILED, _on_case_failed)
    harness.events.on(Events.SUITE_DONE, _on_suite_done)
    report = harness.run()
    return report, ExitCodes.OK if report.ok else ExitCodes.NO


_COMMANDS: dict[str, Callable[[Config, Presentation], tuple[Any, int]]] = {
    "check": _check,
    "geodesic": _geodesic,
    "reduce": _reduce,
    "dfa": _dfa,
    "count": _count,
    "class": _class,
    "tau": _tau,
    "root": _root,
    "maxroot": _maxroot,
    "powconj": _powconj,
    "classes": _classes,
    "ball": _ball,
    "selftest": _selftest,
}


def run(argv: list[str]) -> int:
    """
    Execute one invocation.

    :param argv: arguments without the program name
    :return: the process exit code
    """
    try:
        config = parse_config(argv)
    except SystemExit as ex:
        return int(ex.code or 0)

    try:
        presentation = load_presentation(config.presentation_path)
        payload, code = _COMMANDS[config.command](config, presentation)
    except OSError as ex:
        _LOG.error("Cannot read %s: %s", config.presentation_path, ex)
        print(f"cancelkit: cannot read {config.presentation_path}: {ex.strerror}", file=sys.stderr)
        return ExitCodes.DATA_ERROR
    except CancelKitError as ex:
        _LOG.error("%s: %s", type(ex).__name__, ex)
        print(f"cancelkit: {ex}", file=sys.stderr)
        return ex.exit_code

    text = payload if isinstance(payload, str) else _render(payload, config.output)
    sys.stdout.write(text if text.endswith("\n") else text + "\n")
    return int(code)


def main() -> None:
    """Console entry point."""
    logging.basicConfig()

    level = os.getenv(ENV_LOG_LEVEL, "WARNING").upper()
    if level not in logging.getLevelNamesMapping():
        level = "WARNING"
    for name in _LOGGERS:
        logging.getLogger(name).setLevel(level)

    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
