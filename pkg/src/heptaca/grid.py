"""The ternary heptagrid as seven Fibonacci sector trees around a central cell.

Cells are materialised ring by ring.  Level ``L`` of every sector tree is the
ring of tiles at distance ``L + 1`` from the central cell.  Each ring is a cyclic
ribbon: a tile has one or two neighbours in the ring above it, two lateral
neighbours in its own ring and the rest below.  Sides are numbered 1..7
counter-clockwise, side 1 being the side shared with the father:

* a white node has its father on side 1, lateral neighbours on sides 2 and 7,
  sons on sides 3, 4, 5 (side 6 is the first son of the side-7 neighbour);
* a black node has its father on side 1 and a second upper neighbour on side 2,
  lateral neighbours on sides 3 and 7, sons on sides 4 and 5.

Consequently white nodes have sons black, white, white and black nodes have
sons black, white, in side order.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .fibonacci import cumulative_population, level_population

__all__ = [
    "CellId",
    "CENTER",
    "EXTERIOR",
    "NodeKind",
    "Region",
    "RegionError",
    "build_region",
    "expected_cell_count",
    "verify_region",
    "parse_cell",
]

DEFAULT_MAX_CELLS = 500_000


class RegionError(ValueError):
    """Raised for queries outside a region or regions over the size cap."""


@dataclass(frozen=True, order=True)
class CellId:
    """Address of a tile: ``sector`` 1..7 and node number ``nu`` (root = 1).

    The central cell is ``CellId(0, 0)``; it sorts before every sector cell.
    """

    sector: int
    nu: int

    @property
    def is_center(self) -> bool:
        return self.sector == 0

    def __str__(self) -> str:
        return "C" if self.is_center else f"{self.sector}:{self.nu}"


CENTER = CellId(0, 0)


class _Exterior:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "EXTERIOR"

    def __str__(self) -> str:
        return "X"

    def __reduce__(self):
        return (_Exterior, ())


EXTERIOR = _Exterior()
"""Neighbour slot that lies outside the materialised region."""


class NodeKind(enum.Enum):
    WHITE = "W"
    BLACK = "B"

    @property
    def arity(self) -> int:
        return 3 if self is NodeKind.WHITE else 2

    @property
    def son_sides(self) -> tuple[int, ...]:
        return (3, 4, 5) if self is NodeKind.WHITE else (4, 5)


def parse_cell(text: str) -> CellId:
    text = text.strip()
    if text == "C":
        return CENTER
    try:
        sector, nu = (int(part) for part in text.split(":"))
    except ValueError:
        raise ValueError(f"bad cell address {text!r}, expected C or sector:nu") from None
    if not 1 <= sector <= 7 or nu < 1:
        raise ValueError(f"bad cell address {text!r}")
    return CellId(sector, nu)


def expected_cell_count(max_level: int) -> int:
    return 1 + 7 * cumulative_population(max_level)


@dataclass(eq=False)
class Region:
    """All cells of level ``<= max_level`` with their canonical neighbour slots.

    ``neighbor_index[i][k]`` is the index of the neighbour of cell ``i`` on
    side ``k + 1`` or ``-1`` when that neighbour is exterior to the region.
    Regions are treated as immutable once built.
    """

    max_level: int
    cells: list[CellId]
    neighbor_index: list[tuple[int, ...]]
    kinds: list[NodeKind | None]
    levels: list[int]
    mirrored: bool = False
    _index: dict[CellId, int] = field(init=False, repr=False)

    def __post_init__(self):
        self._index = {c: i for i, c in enumerate(self.cells)}

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, cell: object) -> bool:
        return cell in self._index

    def __iter__(self) -> Iterator[CellId]:
        return iter(self.cells)

    def index(self, cell: CellId) -> int:
        try:
            return self._index[cell]
        except KeyError:
            raise RegionError(f"cell {cell} is not in the region (max level {self.max_level})") from None

    def neighbors(self, cell: CellId) -> tuple:
        """The 7 neighbours of ``cell`` in side order; ``EXTERIOR`` off the rim."""
        return tuple(self.cells[j] if j >= 0 else EXTERIOR for j in self.neighbor_index[self.index(cell)])

    def level(self, cell: CellId) -> int:
        """Tree level; the central cell is reported as level -1."""
        return self.levels[self.index(cell)]

    def kind(self, cell: CellId) -> NodeKind:
        k = self.kinds[self.index(cell)]
        if k is None:
            raise RegionError("the central cell is neither black nor white")
        return k

    def father(self, cell: CellId) -> CellId:
        if cell.is_center:
            raise RegionError("the central cell has no father")
        return self.neighbors(cell)[0]

    def son_sides(self, cell: CellId) -> tuple[int, ...]:
        sides = self.kind(cell).son_sides
        return tuple(_mirror_side(s) for s in sides) if self.mirrored else sides

    def sons(self, cell: CellId) -> list:
        """Sons in left-to-right order; ``EXTERIOR`` markers at the rim."""
        if cell.is_center:
            return [CellId(s, 1) for s in range(1, 8)]
        ring = self.neighbors(cell)
        sides = sorted(self.son_sides(cell), reverse=self.mirrored)
        return [ring[s - 1] for s in sides]

    def is_rim(self, cell: CellId) -> bool:
        return self.level(cell) == self.max_level

    def level_cells(self, level: int, sector: int | None = None) -> list[CellId]:
        """Cells of one level in left-to-right order, sector by sector."""
        out = [c for i, c in enumerate(self.cells) if self.levels[i] == level]
        if sector is not None:
            out = [c for c in out if c.sector == sector]
        return out

    def rotate(self, cell: CellId, shift: int = 1) -> CellId:
        """Image of ``cell`` under the rotation mapping sector s to s + shift."""
        if cell.is_center:
            return cell
        return CellId((cell.sector - 1 + shift) % 7 + 1, cell.nu)

    def edited(self, replacements: Mapping[CellId, Sequence]) -> "Region":
        """Copy with some neighbour tuples replaced, without any validation."""
        nbrs = list(self.neighbor_index)
        for cell, ring in replacements.items():
            nbrs[self.index(cell)] = tuple(
                -1 if n is EXTERIOR else self.index(n) for n in ring
            )
        return Region(self.max_level, list(self.cells), nbrs, list(self.kinds), list(self.levels), self.mirrored)

    def dump(self) -> str:
        """Diagnostic listing, one line per cell: ``cell kind n1 .. n7``."""
        lines = []
        for i, cell in enumerate(self.cells):
            kind = self.kinds[i].value if self.kinds[i] else "-"
            ring = " ".join(str(self.cells[j]) if j >= 0 else "X" for j in self.neighbor_index[i])
            lines.append(f"{cell} {kind} {ring}")
        return "\n".join(lines) + "\n"


def _mirror_side(side: int) -> int:
    return side if side == 1 else 9 - side


def _max_cells_from_env() -> int:
    raw = os.environ.get("HEPTACA_MAX_CELLS")
    return int(raw) if raw else DEFAULT_MAX_CELLS


def build_region(max_level: int, *, max_cells: int | None = None, mirrored: bool = False) -> Region:
    """Materialise every cell of level ``<= max_level``.

    ``mirrored`` numbers sides clockwise instead; it exists to compare the two
    lateral orientations and is not what the rule table expects.
    """
    if max_level < 0:
        raise ValueError("max_level must be non-negative")
    cap = _max_cells_from_env() if max_cells is None else max_cells
    total = expected_cell_count(max_level)
    if total > cap:
        raise RegionError(f"region of level {max_level} has {total} cells, over the cap of {cap}")

    cells = [CENTER]
    kinds: list[NodeKind | None] = [None]
    levels = [-1]
    nbrs: list[list[int]] = [[0] * 7]

    def new_cell(cell: CellId, kind: NodeKind, level: int) -> int:
        cells.append(cell)
        kinds.append(kind)
        levels.append(level)
        nbrs.append([-1] * 7)
        return len(cells) - 1

    ring = [new_cell(CellId(s, 1), NodeKind.WHITE, 0) for s in range(1, 8)]
    nbrs[0] = list(ring)
    for k, i in enumerate(ring):
        nbrs[i][0] = 0
        nbrs[i][1] = ring[k - 1]
        nbrs[i][6] = ring[(k + 1) % 7]

    for level in range(1, max_level + 1):
        first_nu = cumulative_population(level - 1) + 1
        next_nu = {s: first_nu for s in range(1, 8)}
        new_ring = []
        for x in ring:
            kind = kinds[x]
            sides = kind.son_sides
            for s in sides:
                sector = cells[x].sector
                son_kind = NodeKind.BLACK if s == sides[0] else NodeKind.WHITE
                n = new_cell(CellId(sector, next_nu[sector]), son_kind, level)
                next_nu[sector] += 1
                nbrs[n][0] = x
                nbrs[x][s - 1] = n
                if son_kind is NodeKind.BLACK:
                    # shared with the lower lateral neighbour of the father
                    low = nbrs[x][s - 2]
                    nbrs[n][1] = low
                    nbrs[low][5] = n
                new_ring.append(n)
        for k, u in enumerate(new_ring):
            v = new_ring[(k + 1) % len(new_ring)]
            nbrs[u][6] = v
            nbrs[v][1 if kinds[v] is NodeKind.WHITE else 2] = u
        for s in range(1, 8):
            assert next_nu[s] - first_nu == level_population(level)
        ring = new_ring

    if mirrored:
        nbrs = [[r[0]] + r[1:][::-1] for r in nbrs]
    return Region(max_level, cells, [tuple(r) for r in nbrs], kinds, levels, mirrored)


def _slot(ring: Sequence[int], target: int) -> int:
    try:
        return ring.index(target)
    except ValueError:
        return -1


def verify_region(region: Region) -> list[str]:
    """Audit every structural invariant; an empty list means the region is sound."""
    problems: list[str] = []
    cells, nbrs = region.cells, region.neighbor_index
    if len(cells) != expected_cell_count(region.max_level):
        problems.append(f"cell count {len(cells)} != {expected_cell_count(region.max_level)}")

    for i, cell in enumerate(cells):
        ring = nbrs[i]
        inside = [j for j in ring if j >= 0]
        if len(ring) != 7:
            problems.append(f"{cell}: {len(ring)} neighbour slots")
            continue
        if len(set(inside)) != len(inside):
            problems.append(f"{cell}: repeated neighbour")
        if i in inside:
            problems.append(f"{cell}: neighbour of itself")
        interior = region.levels[i] < region.max_level
        if interior and len(inside) != 7:
            problems.append(f"{cell}: interior cell with exterior slot")
        for j in inside:
            if i not in nbrs[j]:
                problems.append(f"asymmetric adjacency {cell} -> {cells[j]}")
        if not cell.is_center:
            father = ring[0]
            if father < 0 or (region.levels[father] != region.levels[i] - 1):
                problems.append(f"{cell}: slot 1 is not the father")
            elif i not in [nbrs[father][s - 1] for s in _son_sides(region, father)]:
                problems.append(f"{cell}: not a son of its slot-1 neighbour")
        # the three tiles around each vertex must be pairwise adjacent and
        # their side orders must agree
        for k in range(7):
            a, b = ring[k], ring[(k + 1) % 7]
            if a < 0 or b < 0:
                continue
            pa_b, pa_c = _slot(nbrs[a], b), _slot(nbrs[a], i)
            pb_a, pb_c = _slot(nbrs[b], a), _slot(nbrs[b], i)
            if min(pa_b, pa_c, pb_a, pb_c) < 0:
                problems.append(f"vertex {cell}/{cells[a]}/{cells[b]}: not 3 mutually adjacent tiles")
            elif pa_c != (pa_b + 1) % 7 or pb_a != (pb_c + 1) % 7:
                problems.append(f"vertex {cell}/{cells[a]}/{cells[b]}: inconsistent orientation")
    return problems


def _son_sides(region: Region, index: int) -> tuple[int, ...]:
    if region.cells[index].is_center:
        return tuple(range(1, 8))
    return region.son_sides(region.cells[index])


def iter_interior(region: Region) -> Iterable[CellId]:
    return (c for i, c in enumerate(region.cells) if region.levels[i] < region.max_level)
