from __future__ import annotations

import functools

import pytest
from hypothesis import HealthCheck, settings

from schurlab.census import enumerate_srings
from schurlab.groups import parse_group_spec

settings.register_profile(
    "schurlab",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("schurlab")

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def census_for(spec: str):
    return enumerate_srings(parse_group_spec(spec))


@pytest.fixture(scope="session")
def census():
    return census_for


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
