"""Railway layer: abstract circuits, tile colouring, paths, junctions and scenarios."""

from .circuit import (
    Branch,
    CircuitError,
    CircuitGraph,
    SwitchKind,
    SwitchState,
    bit_of,
    elementary_circuit,
    parse_circuit,
    register_unit,
    run_circuit,
)
from .coloring import TileColor, paint_sector, verticals_and_isoclines
from .junctions import JunctionKind, JunctionSpec, build_junction
from .paths import PathKind, PathSpec, build_path, locomotive_at, motion_period, trim_ends
from .scenario import SCENARIOS, Scenario, build_scene, load_scenario, parse_scenario

__all__ = [
    "Branch",
    "CircuitError",
    "CircuitGraph",
    "SwitchKind",
    "SwitchState",
    "bit_of",
    "elementary_circuit",
    "parse_circuit",
    "register_unit",
    "run_circuit",
    "TileColor",
    "paint_sector",
    "verticals_and_isoclines",
    "JunctionKind",
    "JunctionSpec",
    "build_junction",
    "PathKind",
    "PathSpec",
    "build_path",
    "locomotive_at",
    "motion_period",
    "trim_ends",
    "SCENARIOS",
    "Scenario",
    "build_scene",
    "load_scenario",
    "parse_scenario",
]
