"""Search bounds, json encoding and environment defaults."""

import json
from fractions import Fraction

import pytest

from cancelkit.config import Bounds, EnhancedJSONEncoder, default_output_format, load_bounds
from cancelkit.conjtrans import HalfInteger
from cancelkit.const import ENV_CONFIG, ENV_FORMAT, OutputFormat
from cancelkit.core import InvalidArgument


def test_default_bounds():
    bounds = Bounds()
    assert (bounds.conj, bounds.radius, bounds.rewrite_cap) == (6, 10, 4)


@pytest.mark.parametrize("field", ["conj", "radius", "rewrite_cap", "orbit_cap", "ball_cap"])
def test_bounds_must_be_positive(field):
    with pytest.raises(InvalidArgument):
        Bounds(**{field: 0})


def test_override_skips_unset_values():
    bounds = Bounds().override(conj=3, radius=None)
    assert bounds.conj == 3
    assert bounds.radius == 10


def test_load_bounds(tmp_path):
    path = tmp_path / "bounds.json"
    path.write_text(json.dumps({"conj": 2, "radius": 7, "colour": "red", "ball_cap": -5}), encoding="utf-8")
    bounds = load_bounds(str(path))
    assert bounds.conj == 2
    assert bounds.radius == 7
    assert bounds.ball_cap == Bounds().ball_cap


def test_load_bounds_from_environment(tmp_path, monkeypatch):
    path = tmp_path / "bounds.json"
    path.write_text('{"rewrite_cap": 9}', encoding="utf-8")
    monkeypatch.setenv(ENV_CONFIG, str(path))
    assert load_bounds().rewrite_cap == 9


@pytest.mark.parametrize("content", ["", "not json", "[1, 2]"])
def test_load_bounds_falls_back_to_defaults(tmp_path, content):
    path = tmp_path / "bounds.json"
    path.write_text(content, encoding="utf-8")
    assert load_bounds(str(path)) == Bounds()


def test_missing_bounds_file(tmp_path):
    assert load_bounds(str(tmp_path / "absent.json")) == Bounds()


def test_output_format_from_environment(monkeypatch):
    monkeypatch.delenv(ENV_FORMAT, raising=False)
    assert default_output_format() == OutputFormat.JSON
    monkeypatch.setenv(ENV_FORMAT, "TSV")
    assert default_output_format() == OutputFormat.TSV
    monkeypatch.setenv(ENV_FORMAT, "yaml")
    assert default_output_format() == OutputFormat.JSON


def test_encoder():
    payload = {"tau": HalfInteger(3), "ratio": Fraction(8, 7), "letters": {"b", "a"}, "bounds": Bounds(conj=1)}
    data = json.loads(json.dumps(payload, cls=EnhancedJSONEncoder))
    assert data["tau"] == {"twice": 3}
    assert data["ratio"] == "8/7"
    assert data["letters"] == ["a", "b"]
    assert data["bounds"]["conj"] == 1
