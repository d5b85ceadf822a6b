"""Command line front end: output formats and exit codes."""

import json

import pytest

from cancelkit.cli import parse_config, run
from cancelkit.const import DfaFormat, ExitCodes, ModelName, OutputFormat


def run_json(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_check(grp, capsys):
    code, data = run_json(capsys, "check", grp("hex"))
    assert code == ExitCodes.OK
    assert data["c_max"] == 3
    assert data["t_max"] == 6
    assert data["classification"] == "Cpp3T6"


def test_check_unbounded(grp, capsys):
    _, data = run_json(capsys, "check", grp("a4"))
    assert data["c_max"] == ">=64"
    assert data["p_holds"] is False
    assert data["classification"] == "Unclassified"


def test_geodesic_word(grp, capsys):
    code, data = run_json(capsys, "geodesic", grp("z2"), "aabb")
    assert code == ExitCodes.OK
    assert data == {"word": "aabb", "geodesic": True, "certificate": None}


def test_non_geodesic_word(grp, capsys):
    code, data = run_json(capsys, "geodesic", grp("z2"), "abAb")
    assert code == ExitCodes.NO
    assert data["certificate"]["outer"] == "abA"
    assert data["certificate"]["replacement"] == "b"


def test_reduce(grp, capsys):
    code, data = run_json(capsys, "reduce", grp("klein"), "abab")
    assert code == ExitCodes.OK
    assert data["geodesic"] == "bb"
    assert data["length"] == 2
    assert len(data["trail"]) == 1


def test_tau(grp, capsys):
    code, data = run_json(capsys, "tau", grp("klein"), "ab")
    assert code == ExitCodes.OK
    assert data == {"twice": 2}


def test_class(grp, capsys):
    _, data = run_json(capsys, "class", grp("z2"), "baB")
    assert data["rep"] == "a"
    assert data["certified"] is True


def test_count(grp, capsys):
    _, data = run_json(capsys, "count", grp("z2"), "3")
    assert data == {"counts": [1, 4, 12, 28]}


def test_dfa_dot(grp, capsys):
    assert run(["dfa", grp("z2")]) == ExitCodes.OK
    assert capsys.readouterr().out.startswith("digraph geodesics {")


def test_dfa_tsv(grp, capsys):
    assert run(["dfa", grp("z2"), "--out", "tsv"]) == ExitCodes.OK
    assert len(capsys.readouterr().out.splitlines()) == 40


@pytest.mark.parametrize(
    "argv, code",
    [
        (["root", "z2", "aabb", "2"], ExitCodes.OK),
        (["root", "z2", "aab", "2"], ExitCodes.NO),
        (["maxroot", "z2", "aaaaaa"], ExitCodes.OK),
        (["powconj", "klein", "bb", "ab"], ExitCodes.OK),
        (["powconj", "z2", "a", "b"], ExitCodes.NO),
        (["classes", "z2", "1"], ExitCodes.OK),
    ],
)
def test_decision_exit_codes(grp, capsys, argv, code):
    command, name, *rest = argv
    assert run([command, grp(name), *rest]) == code
    assert json.loads(capsys.readouterr().out)["verdict" if command != "classes" else "count"] is not None


def test_maxroot_payload(grp, capsys):
    _, data = run_json(capsys, "maxroot", grp("z2"), "aaaaaa")
    assert data["n"] == 6


def test_classes_payload(grp, capsys):
    _, data = run_json(capsys, "classes", grp("z2"), "2")
    assert data["count"] == 13


def test_ball_tsv(grp, capsys):
    assert run(["ball", grp("klein"), "1", "--format", "tsv"]) == ExitCodes.OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "0,0\t0"
    assert len(lines) == 5


def test_ball_json(grp, capsys):
    _, data = run_json(capsys, "ball", grp("hex"), "1")
    assert data["spheres"] == [1, 6]


def test_text_format(grp, capsys):
    assert run(["tau", grp("z2"), "ab", "--format", "text"]) == ExitCodes.OK
    assert capsys.readouterr().out == "twice: 4\n"


def test_format_from_environment(grp, capsys, monkeypatch):
    monkeypatch.setenv("CANCELKIT_FORMAT", "tsv")
    assert run(["tau", grp("z2"), "ab"]) == ExitCodes.OK
    assert capsys.readouterr().out == "twice\t4\n"


def test_selftest(grp, capsys):
    code, data = run_json(capsys, "selftest", grp("z2"), "--radius", "2", "--samples", "5")
    assert code == ExitCodes.OK
    assert data["ok"] is True


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["frobnicate"],
        ["root", "x.grp", "ab"],
        ["root", "x.grp", "ab", "two"],
        ["dfa", "x.grp", "--out", "png"],
        ["tau", "x.grp", "ab", "--bound-conj", "abc"],
        ["tau", "x.grp", "ab", "--bound-conj", "-1"],
        ["tau", "x.grp", "ab", "--radius", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    assert run(argv) == ExitCodes.USAGE


def test_version(capsys):
    assert run(["--version"]) == ExitCodes.OK
    assert "cancelkit" in capsys.readouterr().out


def test_missing_file(capsys, tmp_path):
    assert run(["check", str(tmp_path / "missing.grp")]) == ExitCodes.DATA_ERROR


@pytest.mark.parametrize(
    "content",
    ["gens: a b\nrel: abBA\n", "rel: abAB\n", "gens: a b\nrel: abcd\n"],
)
def test_bad_presentations(capsys, tmp_path, content):
    path = tmp_path / "bad.grp"
    path.write_text(content, encoding="utf-8")
    assert run(["check", str(path)]) == ExitCodes.DATA_ERROR
    assert capsys.readouterr().err.splitlines()[-1].startswith("cancelkit:")


@pytest.mark.parametrize(
    "argv",
    [
        ["geodesic", "z2", "abx"],
        ["tau", "a4", "a"],
        ["maxroot", "z2", "abAB"],
        ["ball", "z2", "2", "--model", "klein"],
        ["root", "z2", "ab", "0"],
        ["classes", "z2", "1/3"],
        ["count", "z2", "-1"],
    ],
)
def test_data_errors(grp, capsys, argv):
    command, name, *rest = argv
    assert run([command, grp(name), *rest]) == ExitCodes.DATA_ERROR


def test_parse_config():
    config = parse_config(
        ["dfa", "p.grp", "--out", "tsv", "--model", "klein", "--bound-conj", "3", "--seed", "9", "--format", "text"]
    )
    assert config.command == "dfa"
    assert config.presentation_path == "p.grp"
    assert config.dfa_format == DfaFormat.TSV
    assert config.model == ModelName.KLEIN
    assert config.bounds.conj == 3
    assert config.seed == 9
    assert config.output == OutputFormat.TEXT
    assert config.arguments == {}


def test_parse_config_collects_arguments():
    assert parse_config(["powconj", "p.grp", "bb", "ab"]).arguments == {"w1": "bb", "w2": "ab"}
    assert parse_config(["root", "p.grp", "aabb", "2"]).arguments == {"word": "aabb", "n": 2}
    selftest = parse_config(["selftest", "p.grp", "--radius", "4", "--samples", "20"])
    assert selftest.arguments == {"samples": 20, "length": 4}
    assert selftest.bounds.radius == 4


def test_parse_config_rejects_nonpositive_bounds(capsys):
    with pytest.raises(SystemExit) as ex:
        parse_config(["tau", "p.grp", "ab", "--rewrite-cap", "0"])
    assert ex.value.code == ExitCodes.USAGE
    assert "rewrite_cap" in capsys.readouterr().err
