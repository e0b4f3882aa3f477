"""Cell-level locomotive paths on the heptagrid.

A path is four tracks: S1 (green), S2 (blue), S3 (the proper track, blank,
where the locomotive runs) and S4 (the safeguard track, blank except for
blue milestones on the cells with two S3 neighbours).  The locomotive is a
blue front followed by a red rear on two contiguous S3 cells.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..engine import Configuration, MissingRule, RuleTable, State, evaluate, run
from ..grid import CellId, NodeKind, Region, RegionError

__all__ = [
    "PathKind",
    "PathSpec",
    "PathError",
    "BuiltPath",
    "IdleReport",
    "idle_report",
    "MotionReport",
    "build_path",
    "trim_ends",
    "place_locomotive",
    "remove_locomotive",
    "locomotive_at",
    "motion_period",
    "oracle_motion_1d",
]


class PathKind(enum.Enum):
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    SLIPROAD = "sliproad"


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class PathSpec:
    """What to build.

    ``anchor`` is the first S3 cell of a horizontal path (its level fixes the
    four isoclines), the first blue cell of a vertical path, or the first
    track cell of a slip road.  ``span`` counts S3 cells (horizontal), blue
    cells (vertical) or flowers (slip road); a horizontal path without span
    is the whole ring.  ``direction`` is +1 or -1 along the ring for a
    horizontal segment and the side number of the second track cell for a
    slip road.  ``turns`` is a word over ``+``/``-`` giving the turn taken
    at each slip-road flower.
    """

    kind: PathKind
    anchor: CellId
    span: int | None = None
    direction: int = 1
    turns: str = ""
    margin: int = 2


@dataclass
class IdleReport:
    changed: list[tuple[CellId, State, State]]
    missing: list[MissingRule]

    @property
    def fixed(self) -> bool:
        return not self.changed and not self.missing


def idle_report(config: Configuration, table: RuleTable, cells: set[CellId]) -> IdleReport:
    """Cells among ``cells`` that would change, or have no rule, in one step."""
    changed, missing = [], []
    for cell, new in sorted(evaluate(config, table, cells).items()):
        if isinstance(new, MissingRule):
            missing.append(new)
        elif new is not config[cell]:
            changed.append((cell, config[cell], new))
    return IdleReport(changed, missing)


@dataclass
class BuiltPath:
    spec: PathSpec
    region: Region
    s1: set[CellId]
    s2: set[CellId]
    s3: list[CellId]
    s4: set[CellId]
    milestones: set[CellId]
    closed: bool = False
    notes: list[str] = field(default_factory=list)
    trimmed: set[CellId] = field(default_factory=set)

    def idle(self) -> Configuration:
        states = {c: State.G for c in self.s1}
        states.update({c: State.B for c in self.s2 | self.milestones})
        return Configuration(self.region, states)

    def cells(self) -> set[CellId]:
        return self.s1 | self.s2 | set(self.s3) | self.s4

    def neighbourhood(self) -> set[CellId]:
        """Path cells together with all their region neighbours."""
        out = set(self.cells())
        for c in list(out):
            out.update(n for n in self.region.neighbors(c) if isinstance(n, CellId))
        return out

    def s3_neighbours(self, cell: CellId) -> int:
        on = set(self.s3)
        return sum(1 for n in self.region.neighbors(cell) if n in on)

    def track_violations(self) -> list[str]:
        """Disjointness and milestone placement problems."""
        out = []
        sets = {"S1": self.s1, "S2": self.s2, "S3": set(self.s3), "S4": self.s4}
        names = list(sets)
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                both = sets[a] & sets[b]
                if both:
                    out.append(f"{a} and {b} share {sorted(both)[0]}")
        for cell in sorted(self.s4 - self.trimmed):
            k = self.s3_neighbours(cell)
            if cell in self.milestones and k != 2:
                out.append(f"milestone {cell} has {k} S3 neighbours")
            if cell not in self.milestones and k != 1:
                out.append(f"S4 cell {cell} has {k} S3 neighbours")
        if not self.milestones <= self.s4:
            out.append("milestones outside S4")
        return out

    def idle_report(self, table: RuleTable, cells: set[CellId] | None = None) -> IdleReport:
        return idle_report(self.idle(), table, self.neighbourhood() if cells is None else cells)

    def index(self, k: int) -> CellId:
        if self.closed:
            return self.s3[k % len(self.s3)]
        if not 0 <= k < len(self.s3):
            raise PathError(f"S3 index {k} outside 0..{len(self.s3) - 1}")
        return self.s3[k]


def _check_margin(region: Region, cells: set[CellId], margin: int) -> None:
    deepest = max(region.level(c) for c in cells)
    if deepest > region.max_level - margin:
        raise PathError(
            f"path reaches level {deepest}; a level-{region.max_level} region leaves "
            f"fewer than {margin} blank levels below it"
        )


def _upper(region: Region, cell: CellId) -> list[CellId]:
    level = region.level(cell)
    return [n for n in region.neighbors(cell) if isinstance(n, CellId) and region.level(n) == level - 1]


def _lower(region: Region, cell: CellId) -> list[CellId]:
    level = region.level(cell)
    return [n for n in region.neighbors(cell) if isinstance(n, CellId) and region.level(n) == level + 1]


def _milestones(region: Region, s3: list[CellId], s4: set[CellId]) -> set[CellId]:
    on = set(s3)
    return {c for c in s4 if sum(1 for n in region.neighbors(c) if n in on) == 2}


def _horizontal(spec: PathSpec, region: Region) -> BuiltPath:
    level = region.level(spec.anchor)
    if level < 2:
        raise PathError("a horizontal path needs its S3 isocline on level 2 or deeper")
    ring = region.level_cells(level)
    start = ring.index(spec.anchor)
    closed = spec.span is None or spec.span >= len(ring)
    if closed:
        s3 = ring[start:] + ring[:start]
        if spec.direction < 0:
            s3 = [s3[0]] + s3[:0:-1]
    else:
        if spec.span < 1:
            raise PathError("span must be positive")
        s3 = [ring[(start + spec.direction * k) % len(ring)] for k in range(spec.span)]
    s2 = {u for c in s3 for u in _upper(region, c)}
    s1 = {u for c in s2 for u in _upper(region, c)}
    s4 = {d for c in s3 for d in _lower(region, c)}
    _check_margin(region, s1 | s2 | set(s3) | s4, spec.margin)
    return BuiltPath(spec, region, s1, s2, s3, s4, _milestones(region, s3, s4), closed)


def _order_track(region: Region, cells: set[CellId], first: CellId) -> list[CellId]:
    order = [first]
    prev = None
    while True:
        nxt = [n for n in region.neighbors(order[-1]) if n in cells and n != prev and n not in order]
        if not nxt:
            break
        if len(nxt) > 1:
            raise PathError(f"proper track branches at {order[-1]}")
        prev = order[-1]
        order.append(nxt[0])
    if len(order) != len(cells):
        raise PathError("proper track is not a single line")
    return order


def _vertical(spec: PathSpec, region: Region) -> BuiltPath:
    if region.kind(spec.anchor) is not NodeKind.BLACK:
        raise PathError(f"a vertical starts on a black node; {spec.anchor} is white")
    chain = [spec.anchor]
    while spec.span is None or len(chain) < spec.span:
        son = region.neighbors(chain[-1])[3]
        if not isinstance(son, CellId):
            break
        chain.append(son)
    if spec.span is not None and len(chain) < spec.span:
        raise PathError(f"only {len(chain)} blue cells fit below {spec.anchor}")
    s2 = set(chain)
    s1 = {region.neighbors(c)[2] for c in chain} - s2
    s3 = {n for c in chain for n in region.neighbors(c)[4:]} - s1 - s2
    if any(not isinstance(c, CellId) for c in s1 | s3):
        raise PathError("vertical path leaves the region")
    s4 = {n for c in s3 for n in region.neighbors(c) if isinstance(n, CellId)} - s1 - s2 - s3
    _check_margin(region, s1 | s2 | s3 | s4, spec.margin)
    ends = [c for c in s3 if sum(1 for n in region.neighbors(c) if n in s3) == 1]
    first = min(ends, key=lambda c: (region.level(c), c))
    s3_order = _order_track(region, s3, first)
    if spec.direction < 0:
        s3_order.reverse()
    return BuiltPath(spec, region, s1, s2, s3_order, s4, _milestones(region, s3_order, s4))


def _sliproad(spec: PathSpec, region: Region) -> BuiltPath:
    if not 1 <= spec.direction <= 7:
        raise PathError("a slip road's direction is the side (1..7) of its second cell")
    if any(t not in "+-" for t in spec.turns):
        raise PathError(f"turns must be a word over '+' and '-', got {spec.turns!r}")
    second = region.neighbors(spec.anchor)[spec.direction - 1]
    if not isinstance(second, CellId):
        raise PathError("slip road leaves the region")
    track = [spec.anchor, second]
    milestones: set[CellId] = set()
    for turn in spec.turns:
        t = 1 if turn == "+" else -1
        ring = region.neighbors(track[-1])
        if any(not isinstance(n, CellId) for n in ring):
            raise PathError(f"flower at {track[-1]} is cut by the rim")
        p = ring.index(track[-2])
        milestones.update((ring[(p - 1) % 7], ring[(p + 1) % 7], ring[(p + 3 * t) % 7]))
        track.append(ring[(p + 2 * t) % 7])
    if len(set(track)) != len(track) or milestones & set(track):
        raise PathError(f"turns {spec.turns!r} make the slip road run into itself")
    s4 = {n for c in track for n in region.neighbors(c) if isinstance(n, CellId)} - set(track)
    _check_margin(region, set(track) | s4, spec.margin)
    path = BuiltPath(spec, region, set(), set(), track, s4, milestones)
    path.notes.append("slip roads carry only the proper track and its milestones")
    return path


def build_path(spec: PathSpec, region: Region) -> BuiltPath:
    if spec.anchor not in region:
        raise PathError(f"anchor {spec.anchor} is outside the region")
    try:
        if spec.kind is PathKind.HORIZONTAL:
            return _horizontal(spec, region)
        if spec.kind is PathKind.VERTICAL:
            return _vertical(spec, region)
        return _sliproad(spec, region)
    except RegionError as exc:
        raise PathError(str(exc)) from None


def _problem_cells(path: BuiltPath, table: RuleTable) -> list[CellId]:
    report = path.idle_report(table)
    return [c for c, _, _ in report.changed] + [m.cell for m in report.missing]


def _drop(path: BuiltPath, cell: CellId) -> None:
    path.s1.discard(cell)
    path.s2.discard(cell)
    path.milestones.discard(cell)


def trim_ends(path: BuiltPath, table: RuleTable, *, rounds: int = 8) -> list[CellId]:
    """Blank coloured cells near the ends of an open path until it is idle.

    Greedy: each round blanks the green, blue or milestone cell next to a
    failing cell that leaves the fewest failing cells.  Returns the blanked
    cells; raises :class:`PathError` if no round helps.  The path is
    modified in place.
    """
    removed: list[CellId] = []
    for _ in range(rounds):
        problems = _problem_cells(path, table)
        if not problems:
            break
        coloured = path.s1 | path.s2 | path.milestones
        candidates = sorted({n for c in problems for n in (c, *path.region.neighbors(c)) if n in coloured})
        best = None
        for cell in candidates:
            saved = (set(path.s1), set(path.s2), set(path.milestones))
            _drop(path, cell)
            score = len(_problem_cells(path, table))
            path.s1, path.s2, path.milestones = saved
            if best is None or score < best[0]:
                best = (score, cell)
        if best is None or best[0] >= len(problems):
            raise PathError(f"no end trimming helps; failing cells {problems[:4]}")
        _drop(path, best[1])
        removed.append(best[1])
    else:
        if _problem_cells(path, table):
            raise PathError(f"path still not idle after {rounds} trimming rounds")
    path.trimmed.update(removed)
    if removed:
        path.notes.append("blanked at the ends: " + " ".join(str(c) for c in removed))
    return removed


def place_locomotive(config: Configuration, path: BuiltPath, position: int, direction: int = 1) -> Configuration:
    """Front (B) on S3 cell ``position``, rear (R) on the cell behind it."""
    if direction not in (1, -1):
        raise PathError("direction is +1 or -1 along the proper track")
    front, rear = path.index(position), path.index(position - direction)
    return config.with_states({front: State.B, rear: State.R})


def remove_locomotive(config: Configuration, path: BuiltPath) -> Configuration:
    return config.with_states({c: State.W for c in path.s3})


def locomotive_at(path: BuiltPath, position: int, direction: int = 1) -> Configuration:
    return place_locomotive(path.idle(), path, position, direction)


@dataclass
class MotionReport:
    period: int | None
    periods: int
    steps: int
    missing: list[MissingRule] = field(default_factory=list)
    rim_contact: list[CellId] = field(default_factory=list)
    mismatch_at: int | None = None

    @property
    def ok(self) -> bool:
        return self.period is not None and not self.missing and not self.rim_contact and self.mismatch_at is None


def motion_period(
    path: BuiltPath,
    table: RuleTable,
    position: int,
    direction: int = 1,
    *,
    periods: int = 10,
    max_period: int = 8,
) -> MotionReport:
    """Find the number of steps p that moves the locomotive one S3 cell, then hold it.

    After p is found the run continues for ``periods`` periods and every
    p-th configuration must be the idle path with the locomotive advanced
    by one more cell.
    """
    start = locomotive_at(path, position, direction)
    probe = run(start, table, max_period)
    target = locomotive_at(path, position + direction, direction)
    period = next((k for k, c in enumerate(probe.configs) if k and c == target), None)
    if period is None:
        missing = probe.missing.missing if probe.missing else []
        return MotionReport(None, 0, len(probe) - 1, missing, probe.rim_contact)
    trace = run(start, table, period * periods)
    report = MotionReport(period, 0, len(trace) - 1)
    if trace.missing:
        report.missing = trace.missing.missing
    report.rim_contact = trace.rim_contact
    for k in range(1, periods + 1):
        if k * period >= len(trace):
            break
        if trace[k * period] != locomotive_at(path, position + k * direction, direction):
            report.mismatch_at = k * period
            break
        report.periods = k
    return report


_MOTION = {("B", "W", "W"): "B", ("R", "B", "W"): "R", ("W", "R", "B"): "W", ("W", "W", "R"): "W"}


def oracle_motion_1d(line: list[str], steps: int, direction: int = 1) -> list[str]:
    """Run the four three-cell motion rules on a line of W/B/R cells.

    A cell reads (behind, itself, ahead); a triple not covered by the rules
    keeps its centre, and the ends read W outside the line.  With
    ``direction = -1`` ahead is to the left.
    """
    cells = [str(s) for s in line]
    if any(s not in "WBR" or len(s) != 1 for s in cells):
        raise ValueError(f"line holds W, B and R only: {line}")
    if cells.count("B") > 1 or cells.count("R") > 1 or cells.count("B") != cells.count("R"):
        raise ValueError("at most one locomotive (one B front and one R rear) on the line")
    if direction not in (1, -1):
        raise ValueError("direction is +1 or -1")
    for _ in range(steps):
        padded = ["W"] + cells + ["W"]
        new = []
        for k in range(1, len(padded) - 1):
            behind, ahead = (padded[k - 1], padded[k + 1])[:: direction]
            new.append(_MOTION.get((behind, padded[k], ahead), padded[k]))
        cells = new
    return cells
