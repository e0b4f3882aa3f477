"""Named starting configurations and ``key=value`` scenario files.

A scenario file holds one ``key=value`` per line, ``#`` starts a comment::

    kind=horizontal
    level=7
    anchor=1:34
    locomotive=10
    heading=1

``kind`` is ``quiescent``, ``horizontal``, ``vertical``, ``sliproad``,
``crossing`` or ``switch-<fixed|memory|flipflop>-<left|right>``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path

from ..engine import Configuration, RuleTable
from ..grid import CENTER, CellId, Region, build_region, parse_cell
from .circuit import Branch
from .junctions import Frame, JunctionCandidate, JunctionKind, JunctionSpec, build_junction
from .paths import BuiltPath, PathKind, PathSpec, build_path, place_locomotive, trim_ends

__all__ = [
    "ScenarioError",
    "Scenario",
    "Scene",
    "SCENARIOS",
    "parse_scenario",
    "load_scenario",
    "build_scene",
]


class ScenarioError(ValueError):
    pass


_PATH_KINDS = {k.value: k for k in PathKind}
_SWITCH_KINDS = {"fixed": JunctionKind.FIXED, "memory": JunctionKind.MEMORY, "flipflop": JunctionKind.FLIP_FLOP}
_SIDES = {"left": Branch.LEFT, "right": Branch.RIGHT}


@dataclass(frozen=True)
class Scenario:
    kind: str
    level: int = 5
    anchor: CellId | None = None
    span: int | None = None
    direction: int = 1
    turns: str = ""
    locomotive: int | None = None
    heading: int = 1
    trim: bool = False
    centre: CellId = CENTER
    frame: str = "local"
    radius: int = 2
    gap: int = 4
    about: str = field(default="", compare=False)

    def __post_init__(self):
        kind = self.kind
        if kind in ("quiescent", "crossing") or kind in _PATH_KINDS:
            pass
        elif kind.startswith("switch-"):
            parts = kind.split("-")
            if len(parts) != 3 or parts[1] not in _SWITCH_KINDS or parts[2] not in _SIDES:
                raise ScenarioError(f"unknown switch {kind!r}; use switch-<fixed|memory|flipflop>-<left|right>")
        else:
            raise ScenarioError(f"unknown scenario kind {kind!r}")
        if kind in _PATH_KINDS and self.anchor is None:
            raise ScenarioError(f"a {kind} scenario needs an anchor")
        if self.heading not in (1, -1):
            raise ScenarioError("heading is 1 or -1")
        if self.frame not in ("local", "sector"):
            raise ScenarioError("frame is local or sector")
        if self.level < 1:
            raise ScenarioError("level must be at least 1")

    def to_text(self) -> str:
        lines = [f"kind={self.kind}"]
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name in ("kind", "about") or value == f.default:
                continue
            lines.append(f"{f.name}={str(value).lower() if isinstance(value, bool) else value}")
        return "\n".join(lines) + "\n"


@dataclass
class Scene:
    scenario: Scenario
    region: Region
    config: Configuration
    path: BuiltPath | None = None
    junction: JunctionCandidate | None = None
    notes: list[str] = field(default_factory=list)


SCENARIOS: dict[str, Scenario] = {
    "quiescent": Scenario("quiescent", level=3, about="all cells blank"),
    "straight-track": Scenario(
        "horizontal", level=7, anchor=CellId(1, 34), locomotive=10,
        about="horizontal ring on level 4 with a locomotive running forwards",
    ),
    "straight-track-back": Scenario(
        "horizontal", level=7, anchor=CellId(1, 34), locomotive=10, heading=-1,
        about="the same ring with the locomotive running backwards",
    ),
    "ring-idle": Scenario("horizontal", level=7, anchor=CellId(1, 34), about="horizontal ring without locomotive"),
    "segment": Scenario(
        "horizontal", level=7, anchor=CellId(1, 34), span=16, locomotive=6, trim=True,
        about="open horizontal segment, ends blanked until idle, with a locomotive",
    ),
    "vertical": Scenario(
        "vertical", level=8, anchor=CellId(1, 2), span=4, locomotive=3,
        about="vertical path below 1:2 with a locomotive heading down",
    ),
    "sliproad": Scenario(
        "sliproad", level=7, anchor=CellId(1, 3), span=3, direction=1, turns="+-+",
        about="slip road of three flowers from 1:3",
    ),
    "crossing": Scenario("crossing", level=5, about="searched idle crossing around the centre"),
    "switch-fixed-left": Scenario("switch-fixed-left", level=5, about="searched idle fixed switch"),
    "switch-memory-left": Scenario("switch-memory-left", level=5, about="searched idle memory switch"),
    "switch-flipflop-right": Scenario("switch-flipflop-right", level=5, about="searched idle flip-flop switch"),
}


def _int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ScenarioError(f"{key} must be an integer, got {value!r}") from None


def parse_scenario(text: str) -> Scenario:
    values: dict[str, object] = {}
    names = {f.name for f in fields(Scenario)}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep or key not in names or key == "about":
            raise ScenarioError(f"line {number}: cannot read {raw.strip()!r}")
        if key in ("anchor", "centre"):
            try:
                values[key] = parse_cell(value)
            except ValueError as exc:
                raise ScenarioError(f"line {number}: {exc}") from None
        elif key in ("level", "span", "direction", "locomotive", "heading", "radius", "gap"):
            values[key] = None if value.lower() in ("", "none") and key in ("span", "locomotive") else _int(key, value)
        elif key == "trim":
            values[key] = value.lower() in ("1", "true", "yes")
        else:
            values[key] = value
    if "kind" not in values:
        raise ScenarioError("scenario has no kind")
    return Scenario(**values)  # type: ignore[arg-type]


def load_scenario(name_or_path: str | Path) -> Scenario:
    """A built-in scenario by name, or a scenario file."""
    if str(name_or_path) in SCENARIOS:
        return SCENARIOS[str(name_or_path)]
    path = Path(name_or_path)
    if not path.exists():
        raise ScenarioError(f"no built-in scenario or file named {name_or_path}")
    return parse_scenario(path.read_text())


def _junction_spec(sc: Scenario) -> JunctionSpec:
    frame = Frame.LOCAL if sc.frame == "local" else Frame.SECTOR
    if sc.kind == "crossing":
        return JunctionSpec(JunctionKind.CROSSING, centre=sc.centre, frame=frame, radius=sc.radius, gap=sc.gap)
    _, kind, side = sc.kind.split("-")
    return JunctionSpec(_SWITCH_KINDS[kind], _SIDES[side], sc.centre, frame, sc.radius, sc.gap)


def build_scene(sc: Scenario, table: RuleTable, *, max_cells: int | None = None) -> Scene:
    """Build the region and starting configuration of ``sc``.

    ``table`` is used to trim path ends and to search junctions.
    """
    region = build_region(sc.level, max_cells=max_cells)
    if sc.kind == "quiescent":
        return Scene(sc, region, Configuration(region))
    if sc.kind in _PATH_KINDS:
        spec = PathSpec(_PATH_KINDS[sc.kind], sc.anchor, sc.span, sc.direction, sc.turns)
        path = build_path(spec, region)
        if sc.trim:
            trim_ends(path, table)
        config = path.idle()
        if sc.locomotive is not None:
            config = place_locomotive(config, path, sc.locomotive, sc.heading)
        return Scene(sc, region, config, path=path, notes=list(path.notes))
    candidate = build_junction(_junction_spec(sc), region, table)
    if candidate.config is None:
        raise ScenarioError(candidate.report().strip())
    return Scene(sc, region, candidate.config, junction=candidate, notes=list(candidate.notes))

