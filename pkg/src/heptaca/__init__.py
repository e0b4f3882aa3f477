"""A four-state rotation-invariant cellular automaton on the ternary heptagrid."""

from importlib import resources
from pathlib import Path

from .engine import Configuration, RuleTable, State, load_rule_file, run, step
from .grid import CENTER, CellId, Region, build_region

__all__ = [
    "CENTER",
    "CellId",
    "Configuration",
    "Region",
    "RuleTable",
    "State",
    "build_region",
    "fixture_path",
    "load_fixture",
    "load_rule_file",
    "run",
    "step",
]

__version__ = "0.1.0"


def fixture_path() -> Path:
    """The bundled 4-state rule table."""
    return Path(str(resources.files(__package__) / "data" / "table2.rules"))


def load_fixture() -> RuleTable:
    return load_rule_file(fixture_path())
