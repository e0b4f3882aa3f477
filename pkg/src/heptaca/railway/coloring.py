"""Four-colour substitution tiling used to lay out verticals and isoclines.

Each tile colour rewrites into the colours of the tiles on the next level:
``G -> Y B G``, ``Y -> Y B G``, ``O -> Y B O`` and ``B -> B O``.  A tree is
painted level by level: the colour word of level ``L + 1`` is the
concatenation of the substitutes of the level-``L`` word, laid over the
tree's level cells from left to right.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass

from ..grid import CellId, NodeKind, Region

__all__ = [
    "TileColor",
    "SUBSTITUTION",
    "substitute",
    "substitution_matrix",
    "census_by_matrix",
    "Coloring",
    "paint_sector",
    "subtree_levels",
    "yellow_son",
    "verticals_and_isoclines",
]


class TileColor(str, enum.Enum):
    G = "G"
    B = "B"
    Y = "Y"
    O = "O"

    def __str__(self) -> str:
        return self.value


SUBSTITUTION: dict[TileColor, tuple[TileColor, ...]] = {
    TileColor.G: (TileColor.Y, TileColor.B, TileColor.G),
    TileColor.Y: (TileColor.Y, TileColor.B, TileColor.G),
    TileColor.O: (TileColor.Y, TileColor.B, TileColor.O),
    TileColor.B: (TileColor.B, TileColor.O),
}

_ORDER = (TileColor.G, TileColor.B, TileColor.Y, TileColor.O)


def substitute(c: TileColor) -> list[TileColor]:
    return list(SUBSTITUTION[TileColor(c)])


def substitution_matrix() -> list[list[int]]:
    """``m[i][j]`` = copies of colour ``j`` produced by colour ``i``, order G, B, Y, O."""
    return [[SUBSTITUTION[p].count(c) for c in _ORDER] for p in _ORDER]


def census_by_matrix(root: TileColor, level: int) -> dict[TileColor, int]:
    vec = [1 if c is TileColor(root) else 0 for c in _ORDER]
    m = substitution_matrix()
    for _ in range(level):
        vec = [sum(vec[i] * m[i][j] for i in range(4)) for j in range(4)]
    return {c: n for c, n in zip(_ORDER, vec)}


def subtree_levels(region: Region, root: CellId) -> list[list[CellId]]:
    """Cells of the subtree under ``root``, one left-to-right list per level."""
    levels = [[root]]
    while True:
        nxt = [s for c in levels[-1] for s in region.sons(c) if isinstance(s, CellId)]
        if not nxt:
            return levels
        levels.append(nxt)


@dataclass
class Coloring:
    root: CellId
    colors: dict[CellId, TileColor]
    levels: list[list[CellId]]

    def __getitem__(self, cell: CellId) -> TileColor:
        return self.colors[cell]

    def children(self) -> dict[CellId, list[CellId]]:
        """Cells each tile's substitute was laid over, on the next level."""
        out: dict[CellId, list[CellId]] = {}
        for upper, lower in zip(self.levels, self.levels[1:]):
            k = 0
            for cell in upper:
                n = len(SUBSTITUTION[self.colors[cell]])
                out[cell] = lower[k : k + n]
                k += n
        return out

    def census(self, depth: int) -> dict[TileColor, int]:
        counts = Counter(self.colors[c] for c in self.levels[depth])
        return {c: counts.get(c, 0) for c in _ORDER}


def paint_sector(
    region: Region,
    root_color: TileColor = TileColor.G,
    *,
    sector: int = 1,
    root: CellId | None = None,
) -> Coloring:
    """Colour the subtree under ``root`` starting from ``root_color``.

    Without an explicit root, G, Y and O paint the whole tree of ``sector``,
    and B, whose level sizes are those of a black node's subtree, paints the
    subtree of the first black node of that sector.
    """
    root_color = TileColor(root_color)
    if root is None:
        root = CellId(sector, 1)
        if root_color is TileColor.B:
            root = next(s for s in region.sons(root) if isinstance(s, CellId) and region.kind(s) is NodeKind.BLACK)
    levels = subtree_levels(region, root)
    colors: dict[CellId, TileColor] = {}
    word = [root_color]
    for depth, cells in enumerate(levels):
        if depth:
            word = [c for p in word for c in SUBSTITUTION[p]]
        if len(word) != len(cells):
            raise ValueError(
                f"{len(word)} colours for {len(cells)} cells at depth {depth} under {root}; "
                f"{root_color} does not fit a {region.kind(root).name.lower()} node"
            )
        colors.update(zip(cells, word))
    return Coloring(root, colors, levels)


def yellow_son(region: Region, coloring: Coloring, cell: CellId) -> list[CellId]:
    """Sons of ``cell`` painted yellow."""
    return [s for s in region.sons(cell) if isinstance(s, CellId) and coloring.colors.get(s) is TileColor.Y]


def verticals_and_isoclines(region: Region, coloring: Coloring) -> tuple[list[list[CellId]], dict[CellId, int]]:
    """Yellow rays, top first, and an isocline label for every painted cell.

    A ray starts at a yellow tile whose father is not yellow and follows the
    yellow son downwards until the region ends.  The isocline label is the
    tree level.
    """
    rays = []
    for cell, color in sorted(coloring.colors.items()):
        if color is not TileColor.Y:
            continue
        father = region.father(cell)
        if coloring.colors.get(father) is TileColor.Y:
            continue
        ray = [cell]
        while True:
            ys = yellow_son(region, coloring, ray[-1])
            if len(ys) != 1:
                break
            ray.append(ys[0])
        rays.append(ray)
    labels = {cell: region.level(cell) for cell in coloring.colors}
    return rays, labels
