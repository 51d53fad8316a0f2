"""Shared fixtures.

The dual polar spaces and lattices are cached at module level inside the
package, so fixtures exist mainly to give tests one obvious spelling and
to keep the genus-5 objects session-scoped (building the 782595 lines
and the certified span takes tens of seconds; it must happen once).
"""

from __future__ import annotations

import os

import pytest

from polarspan import lattice, polar


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "large: builds genus-5 geometry (tens of seconds)"
    )


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log() -> list[str]:
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def space2() -> polar.DualPolarSpace:
    return polar.space(2)


@pytest.fixture(scope="session")
def space3() -> polar.DualPolarSpace:
    return polar.space(3)


@pytest.fixture(scope="session")
def space4() -> polar.DualPolarSpace:
    return polar.space(4)


@pytest.fixture(scope="session")
def space5() -> polar.DualPolarSpace:
    return polar.space(5)


@pytest.fixture(scope="session")
def span5(space5) -> lattice.SpanCoordinates:
    # the same object express() consults, so it is built exactly once
    return lattice.cached_span(5)


def stretch_enabled() -> bool:
    return os.environ.get("POLARSPAN_STRETCH", "") not in ("", "0")
