from __future__ import annotations

from pathlib import Path

import pytest

from purelab.fixtures import fixture_dir, rep_z, span
from purelab.presheaf import Presheaf

FIXTURES = fixture_dir()


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture
def R() -> Presheaf:
    return rep_z()


@pytest.fixture
def span_cat():
    return span()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
