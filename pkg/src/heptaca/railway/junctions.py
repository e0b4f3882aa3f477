"""Searchable candidates for the idle configurations of crossings and switches.

Only a few facts about the neighbourhood of a junction centre are fixed
here; the builders search the rest: a backtracking fill of the ball of radius
``radius`` around the centre such that every cell inside the ball keeps
its state under the rule table.  The result
carries a report of which stated constraints the candidate meets.

Junction coordinates are written ``k(s)``: ``1(s)`` is the centre's
neighbour ``s`` and ``2(1)`` is the first son of ``1(1)``.  With
``Frame.SECTOR`` they are read as sector coordinates ``s:k`` instead, which
agrees with the local frame only when the centre is the central cell.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..engine import Configuration, RuleTable, State
from ..grid import CENTER, CellId, Region
from ..toolkit import close_under_rotation
from .circuit import Branch
from .paths import IdleReport, idle_report

__all__ = [
    "JunctionKind",
    "Frame",
    "JunctionSpec",
    "Constraint",
    "JunctionCandidate",
    "JunctionError",
    "junction_cell",
    "build_junction",
]


class JunctionKind(enum.Enum):
    CROSSING = "crossing"
    FIXED = "fixed"
    MEMORY = "memory"
    FLIP_FLOP = "flipflop"


class Frame(enum.Enum):
    LOCAL = "local"
    SECTOR = "sector"


class JunctionError(ValueError):
    pass


@dataclass(frozen=True)
class JunctionSpec:
    kind: JunctionKind
    side: Branch = Branch.LEFT
    centre: CellId = CENTER
    frame: Frame = Frame.LOCAL
    radius: int = 2
    gap: int = 4


@dataclass
class Constraint:
    name: str
    holds: bool

    def __str__(self) -> str:
        return f"[{'x' if self.holds else ' '}] {self.name}"


@dataclass
class JunctionCandidate:
    spec: JunctionSpec
    config: Configuration | None
    constraints: list[Constraint]
    idle: IdleReport | None
    explored: int
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.config is not None and self.idle is not None and self.idle.fixed and all(
            c.holds for c in self.constraints
        )

    def report(self) -> str:
        lines = [f"{self.spec.kind.value} {self.spec.side.name.lower()} at {self.spec.centre} ({self.spec.frame.value} frame)"]
        if self.config is None:
            lines.append(f"no candidate found after {self.explored} search nodes")
        else:
            fixed = self.idle.fixed if self.idle else False
            lines.append(f"candidate with {len(self.config)} coloured cells, idle inside the search ball: {fixed}")
        lines.extend(str(c) for c in self.constraints)
        lines.extend(self.notes)
        return "\n".join(lines) + "\n"


def junction_cell(region: Region, centre: CellId, coord: str, frame: Frame = Frame.LOCAL) -> CellId:
    """Resolve ``1(s)`` or ``2(1)`` around ``centre``."""
    try:
        head, tail = coord.rstrip(")").split("(")
        ring, side = int(head), int(tail)
    except ValueError:
        raise JunctionError(f"bad junction coordinate {coord!r}") from None
    if frame is Frame.SECTOR:
        cell = CellId(side, ring)
        if cell not in region:
            raise JunctionError(f"{cell} is outside the region")
        return cell
    if ring == 1:
        cell = region.neighbors(centre)[side - 1]
    elif ring == 2 and side == 1:
        first = region.neighbors(centre)[0]
        around = region.neighbors(first)
        cell = around[(around.index(centre) + 2) % 7]
    else:
        raise JunctionError(f"only 1(s) and 2(1) are defined, got {coord!r}")
    if not isinstance(cell, CellId):
        raise JunctionError(f"{coord} around {centre} falls outside the region")
    return cell


def _ball(region: Region, centre: CellId, radius: int) -> list[set[CellId]]:
    shells = [{centre}]
    seen = {centre}
    for _ in range(radius):
        nxt = set()
        for c in shells[-1]:
            for n in region.neighbors(c):
                if isinstance(n, CellId) and n not in seen:
                    nxt.add(n)
        seen |= nxt
        shells.append(nxt)
    return shells


def _template(spec: JunctionSpec, region: Region) -> tuple[dict[CellId, State], list[str]]:
    """States fixed by the stated facts, and the notes on what they encode."""
    at = lambda coord: junction_cell(region, spec.centre, coord, spec.frame)  # noqa: E731
    fixed = {spec.centre: State.W}
    notes = []
    kind = spec.kind
    if kind is JunctionKind.CROSSING:
        greens = (7 - spec.gap, 7)
        for s in range(1, 8):
            fixed[at(f"1({s})")] = State.G if s in greens else State.W
        notes.append(f"green marks on 1({greens[0]}) and 1(7); the other five neighbours blank")
    elif kind is JunctionKind.FIXED:
        for s in (1, 4, 7):
            fixed[at(f"1({s})")] = State.W
        fixed[at("1(2)")] = State.G
        notes.append("first cells 1(1), 1(4), 1(7) blank; idle cell 1(2) green")
    else:
        sel, obstacle = ("1(1)", "1(7)") if spec.side is Branch.LEFT else ("1(7)", "1(1)")
        for s in range(1, 8):
            fixed[at(f"1({s})")] = State.G
        fixed[at(sel)] = State.W
        fixed[at("1(4)")] = State.W
        fixed[at(obstacle)] = State.G
        fixed[at("2(1)")] = State.B if kind is JunctionKind.MEMORY else State.R
        notes.append(f"selected first cell {sel} and arriving first cell 1(4) blank; five green neighbours")
    return fixed, notes


def _constraints(spec: JunctionSpec, region: Region, config: Configuration) -> list[Constraint]:
    centre = spec.centre
    ring = [n for n in region.neighbors(centre)]
    states = [config[n] if isinstance(n, CellId) else State.W for n in ring]
    out = [Constraint("centre is blank", config[centre] is State.W)]

    def consecutive_blank(cell: CellId, k: int = 3) -> bool:
        around = [config[n] if isinstance(n, CellId) else State.W for n in region.neighbors(cell)]
        return any(all(around[(i + j) % 7] is State.W for j in range(k)) for i in range(7))

    if spec.kind is JunctionKind.CROSSING:
        out.append(Constraint("centre has exactly two green neighbours", states.count(State.G) == 2))
        blanks = [n for n, s in zip(ring, states) if s is State.W and isinstance(n, CellId)]
        idle = [n for n in blanks if consecutive_blank(n)]
        out.append(Constraint("exactly one blank neighbour has three consecutive blank neighbours", len(idle) == 1))
        firsts = [n for n in blanks if n not in idle]
        out.append(Constraint("four first cells", len(firsts) == 4))
        out.append(
            Constraint(
                "every first cell has a green neighbour",
                all(any(config[m] is State.G for m in region.neighbors(n) if isinstance(m, CellId)) for n in firsts),
            )
        )
    elif spec.kind is JunctionKind.FIXED:
        idle = junction_cell(region, centre, "1(2)", spec.frame)
        blue = sum(1 for m in region.neighbors(idle) if isinstance(m, CellId) and config[m] is State.B)
        out.append(Constraint("idle cell is green", config[idle] is State.G))
        out.append(Constraint("idle cell has two blue neighbours", blue == 2))
    else:
        out.append(Constraint("centre has five green neighbours", states.count(State.G) == 5))
        marker = junction_cell(region, centre, "2(1)", spec.frame)
        want = State.B if spec.kind is JunctionKind.MEMORY else State.R
        out.append(Constraint(f"2(1) is {want.value}", config[marker] is want))
        first = junction_cell(region, centre, "1(1)", spec.frame)
        out.append(Constraint("2(1) is next to 1(1)", marker in region.neighbors(first)))
        if spec.kind is JunctionKind.FLIP_FLOP:
            deco = sum(1 for m in region.neighbors(marker) if isinstance(m, CellId) and config[m] is not State.W)
            out.append(Constraint("2(1) has two decorated neighbours", deco >= 2))
    return out


def _around(region: Region, cells) -> set[CellId]:
    return {n for c in cells for n in region.neighbors(c) if isinstance(n, CellId)} | set(cells)


def build_junction(
    spec: JunctionSpec,
    region: Region,
    table: RuleTable,
    *,
    node_limit: int = 200_000,
    max_solutions: int = 500,
    value_order: str = "WBGR",
) -> JunctionCandidate:
    """Search a candidate idle configuration for ``spec``.

    Free cells are those within ``spec.radius`` of the centre or next to a
    template cell.  The boundary of that ball stays open, since the paths
    leading away from the junction continue beyond it: only free cells whose
    neighbours are all free must keep their state.  Solutions are enumerated
    in a fixed order and the first one meeting all stated constraints wins;
    failing that, the first solution is returned with its report.
    """
    try:
        fixed, notes = _template(spec, region)
    except JunctionError as exc:
        return JunctionCandidate(spec, None, [Constraint(str(exc), False)], None, 0)
    notes = [f"template: {n}" for n in notes]
    ball = set().union(*_ball(region, spec.centre, spec.radius))
    free = ball | _around(region, fixed)
    variables = sorted(free, key=lambda c: (region.level(c), c))
    checked = {c for c in free if all(isinstance(n, CellId) and n in free for n in region.neighbors(c))}
    if not set(fixed) <= checked:
        return JunctionCandidate(spec, None, [Constraint("template cells lie inside the search ball", False)], None, 0, notes)

    idle_words: dict[str, list[str]] = {s: [] for s in "WBGR"}
    for rule in close_under_rotation(table):
        if rule.result.value == rule.context.word[0]:
            idle_words[rule.context.word[0]].append(rule.context.word)

    assign: dict[CellId, str] = {}
    domain = {c: [fixed[c].value] if c in fixed else list(value_order) for c in variables}

    def letter(n) -> str | None:
        return assign.get(n) if isinstance(n, CellId) else "W"

    def consistent(cell: CellId) -> bool:
        own = letter(cell)
        if own is None:
            return True
        pattern = [letter(n) for n in region.neighbors(cell)]
        return any(all(p is None or p == w for p, w in zip(pattern, word[1:])) for word in idle_words[own])

    watchers = {c: [c] + [n for n in region.neighbors(c) if isinstance(n, CellId) and n in checked] for c in variables}
    explored = 0
    ring = [n for n in region.neighbors(spec.centre) if isinstance(n, CellId)]

    green_idle = junction_cell(region, spec.centre, "1(2)", spec.frame) if spec.kind is JunctionKind.FIXED else None

    def idle_cells_ok(final: bool) -> bool:
        """Prune on the idle cell: three consecutive blank neighbours at a
        crossing, exactly two blue neighbours at a fixed switch."""
        if green_idle is not None:
            around = [letter(n) for n in region.neighbors(green_idle)]
            blue, open_ = around.count("B"), around.count(None)
            return blue <= 2 and blue + open_ >= 2 and (not final or blue == 2)
        if spec.kind is not JunctionKind.CROSSING:
            return True
        idle = unknown = 0
        for cell in ring:
            if letter(cell) is None:
                unknown += 1
            if letter(cell) != "W":
                continue
            around = [letter(n) for n in region.neighbors(cell)]
            if any(all(around[(i + j) % 7] == "W" for j in range(3)) for i in range(7)):
                idle += 1
            elif any(all(around[(i + j) % 7] in ("W", None) for j in range(3)) for i in range(7)):
                unknown += 1
        return idle <= 1 and (idle + unknown >= 1) and (not final or idle == 1)

    def solutions(k: int):
        nonlocal explored
        if k == len(variables):
            if idle_cells_ok(True):
                yield dict(assign)
            return
        cell = variables[k]
        for value in domain[cell]:
            explored += 1
            if explored > node_limit:
                return
            assign[cell] = value
            if all(consistent(w) for w in watchers[cell]) and idle_cells_ok(False):
                yield from solutions(k + 1)
            del assign[cell]

    first = None
    found = 0
    for solution in solutions(0):
        found += 1
        config = Configuration(region, {c: State(v) for c, v in solution.items()})
        constraints = _constraints(spec, region, config)
        candidate = JunctionCandidate(spec, config, constraints, idle_report(config, table, checked), explored, notes)
        if all(c.holds for c in constraints):
            candidate.notes = notes + [f"first of {found} solutions meeting every constraint"]
            return candidate
        first = first or candidate
        if found >= max_solutions:
            break
    if first is not None:
        first.notes = notes + [f"none of {found} solutions meets every constraint; showing the first"]
        first.explored = explored
        return first
    why = "search budget exhausted" if explored > node_limit else "no idle configuration satisfies the template"
    return JunctionCandidate(spec, None, [], None, explored, notes + [why])
