from __future__ import annotations

import functools
from pathlib import Path

import pytest

from heptaca import load_fixture
from heptaca.engine import RuleTable, parse_rules
from heptaca.grid import build_region
from heptaca.toolkit import close_under_rotation


@functools.lru_cache(maxsize=None)
def region(level: int):
    return build_region(level)


@pytest.fixture(scope="session")
def fixture_table():
    return load_fixture()


@pytest.fixture(scope="session")
def ring_region():
    return region(7)


DATA = Path(__file__).parent / "data"


def straight_track_rules():
    return parse_rules((DATA / "straight_track.rules").read_text())


def passage_classes() -> set[str]:
    """Minimal forms of the rules that change the cell's state."""
    return {r.minimal.word for r in straight_track_rules() if r.result.value != r.context.word[0]}


def elicitation_base(table) -> RuleTable:
    """The table without the passage classes, closed under rotation."""
    drop = passage_classes()
    return RuleTable(close_under_rotation(RuleTable(r for r in table.rules if r.minimal.word not in drop)))


ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip("."))):
            terminalreporter.write_line(line)
