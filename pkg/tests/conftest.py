"""Shared presentations and group contexts."""

from pathlib import Path

import pytest

from cancelkit.config import Bounds
from cancelkit.conjtrans import GroupContext
from cancelkit.core import Presentation, load_presentation

PRESENTATIONS = Path(__file__).resolve().parent.parent / "presentations"


def fixture_path(name: str) -> str:
    """Path of a bundled presentation file."""
    return str(PRESENTATIONS / f"{name}.grp")


@pytest.fixture
def grp():
    """Resolver of bundled presentation paths by name."""
    return fixture_path


@pytest.fixture(scope="session")
def z2() -> Presentation:
    return load_presentation(fixture_path("z2"))


@pytest.fixture(scope="session")
def klein() -> Presentation:
    return load_presentation(fixture_path("klein"))


@pytest.fixture(scope="session")
def hexz2() -> Presentation:
    return load_presentation(fixture_path("hex"))


@pytest.fixture(scope="session")
def freetri() -> Presentation:
    return load_presentation(fixture_path("freetri"))


@pytest.fixture(scope="session")
def a4() -> Presentation:
    return load_presentation(fixture_path("a4"))


@pytest.fixture(scope="session")
def z2_ctx(z2) -> GroupContext:
    return GroupContext(z2)


@pytest.fixture(scope="session")
def klein_ctx(klein) -> GroupContext:
    return GroupContext(klein)


@pytest.fixture(scope="session")
def hex_ctx(hexz2) -> GroupContext:
    return GroupContext(hexz2)


@pytest.fixture(scope="session")
def freetri_ctx(freetri) -> GroupContext:
    # conjugacy classes of a free group grow exponentially, keep the certification sweep short
    return GroupContext(freetri, Bounds(conj=3))
