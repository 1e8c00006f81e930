from __future__ import annotations

import pytest

from qqh.cohring import QuadricSpace

# acceptance results collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def q4():
    return QuadricSpace(4)


@pytest.fixture(scope="session")
def q6():
    return QuadricSpace(6)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
