"""
Constants shared by the cancelkit modules.

:copyright: (c) 2024 by the cancelkit authors.
:license: Mozilla Public License Version 2.0, see LICENSE for more details.
"""

import math
from enum import IntEnum, StrEnum

__version__ = "0.3.0"

# Largest displayed value for unbounded C(p) / T(q) exponents
DISPLAY_CAP = 64
UNBOUNDED = math.inf

DEFAULT_CONJ_BOUND = 6
DEFAULT_RADIUS = 10
DEFAULT_REWRITE_CAP = 4
DEFAULT_ORBIT_CAP = 4000
DEFAULT_BALL_CAP = 250_000
DEFAULT_SEED = 20240101
# Words visited by the generic rewriting search before giving up
REWRITE_NODE_CAP = 50_000

SELFTEST_LENGTH = 6
SELFTEST_SAMPLES = 1000

ENV_FORMAT = "CANCELKIT_FORMAT"
ENV_CONFIG = "CANCELKIT_CONFIG"
ENV_LOG_LEVEL = "CANCELKIT_LOG_LEVEL"

GENS_PREFIX = "gens:"
REL_PREFIX = "rel:"
COMMENT_CHAR = "#"


class ExitCodes(IntEnum):
    """Process exit codes of the command line front end."""

    OK = 0
    NO = 1
    INCONCLUSIVE = 2
    USAGE = 64
    DATA_ERROR = 65


class OutputFormat(StrEnum):
    """Report formats."""

    JSON = "json"
    TSV = "tsv"
    TEXT = "text"


class DfaFormat(StrEnum):
    """Automaton export formats."""

    DOT = "dot"
    TSV = "tsv"


class ModelName(StrEnum):
    """Oracle model selectors accepted by --model."""

    AUTO = "auto"
    Z2 = "z2"
    KLEIN = "klein"
    HEX = "hex"
    FREETRI = "freetri"
    GENERIC = "generic"


class Classification(StrEnum):
    """Algorithm family a presentation falls into."""

    CPP4T4 = "Cpp4T4"
    CPP3T6 = "Cpp3T6"
    C4T4P = "C4T4P"
    C3T6P = "C3T6P"
    C6P = "C6P"
    UNCLASSIFIED = "Unclassified"


class Events(IntEnum):
    """Selftest harness events."""

    STARTED = 0
    CASE_PASSED = 1
    CASE_FAILED = 2
    SUITE_DONE = 3
    FINISHED = 4
