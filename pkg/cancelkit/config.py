"""
Configuration handling of the command line front end.

:copyright: (c) 2024 by the cancelkit authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

import dataclasses
import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from cancelkit.const import (
    DEFAULT_BALL_CAP,
    DEFAULT_CONJ_BOUND,
    DEFAULT_ORBIT_CAP,
    DEFAULT_RADIUS,
    DEFAULT_REWRITE_CAP,
    DEFAULT_SEED,
    ENV_CONFIG,
    ENV_FORMAT,
    DfaFormat,
    ModelName,
    OutputFormat,
)
from cancelkit.core import InvalidArgument

_LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class Bounds:
    """Search bounds shared by the oracle and the conjugacy searches."""

    conj: int = DEFAULT_CONJ_BOUND
    radius: int = DEFAULT_RADIUS
    rewrite_cap: int = DEFAULT_REWRITE_CAP
    orbit_cap: int = DEFAULT_ORBIT_CAP
    ball_cap: int = DEFAULT_BALL_CAP

    def __post_init__(self):
        """Reject non-positive bounds."""
        for item in dataclasses.fields(self):
            value = getattr(self, item.name)
            if not isinstance(value, int) or value <= 0:
                raise InvalidArgument(f"bound {item.name} must be a positive integer, got {value!r}")

    def override(self, **values: int | None) -> "Bounds":
        """Return a copy with every non-None value replaced."""
        return dataclasses.replace(self, **{k: v for k, v in values.items() if v is not None})


@dataclass
class Config:
    """One command line invocation; arguments holds the command specific values by name."""

    command: str
    presentation_path: str | None = None
    arguments: dict[str, Any] = field(default_factory=dict)
    output: OutputFormat = OutputFormat.JSON
    dfa_format: DfaFormat = DfaFormat.DOT
    model: ModelName = ModelName.AUTO
    bounds: Bounds = field(default_factory=Bounds)
    seed: int = DEFAULT_SEED


class EnhancedJSONEncoder(json.JSONEncoder):
    """Report json encoder: dataclasses, objects exposing to_dict(), fractions and sets."""

    def default(self, o):
        if hasattr(o, "to_dict"):
            return o.to_dict()
        if dataclasses.is_dataclass(o):
            return dataclasses.asdict(o)
        if isinstance(o, Fraction):
            return str(o)
        if isinstance(o, (set, frozenset)):
            return sorted(o)
        return super().default(o)


def default_output_format() -> OutputFormat:
    """Output format from the environment, json when unset or invalid."""
    value = os.getenv(ENV_FORMAT)
    if not value:
        return OutputFormat.JSON
    try:
        return OutputFormat(value.lower())
    except ValueError:
        _LOG.warning("Ignoring invalid %s value %s", ENV_FORMAT, value)
        return OutputFormat.JSON


def load_bounds(path: str | None = None) -> Bounds:
    """
    Load search bounds from a json file.

    The file holds one object whose keys are Bounds field names. Unknown keys and invalid values are logged and
    ignored, a missing or unreadable file yields the defaults.

    :param path: bounds file, defaults to the CANCELKIT_CONFIG environment variable
    :return: the loaded bounds
    """
    path = path or os.getenv(ENV_CONFIG)
    bounds = Bounds()
    if not path:
        return bounds
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError:
        _LOG.error("Cannot open the config file %s", path)
        return bounds
    except ValueError:
        _LOG.error("Empty or invalid config file %s", path)
        return bounds
    if not isinstance(data, dict):
        _LOG.error("Config file %s must hold a json object", path)
        return bounds

    known = {item.name for item in dataclasses.fields(Bounds)}
    for key, value in data.items():
        if key not in known:
            _LOG.warning("Unknown configuration entry will be ignored: %s", key)
            continue
        try:
            bounds = bounds.override(**{key: value})
        except InvalidArgument as ex:
            _LOG.warning("Invalid configuration entry will be ignored: %s", ex)
    return bounds
