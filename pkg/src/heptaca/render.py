"""SVG snapshots of configurations in the Poincaré disc.

The central heptagon is placed around the origin.  Every other tile is the
mirror image of an already placed neighbour across their shared edge, which
for the disc is an inversion in the circle carrying that edge.  Edges are
drawn as circular arcs.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .engine import Configuration, State
from .grid import CENTER, CellId, Region

__all__ = [
    "RenderStyle",
    "StyleError",
    "parse_style",
    "load_style",
    "central_circumradius",
    "layout",
    "locomotive_fronts",
    "render_svg",
]

DEFAULT_FILLS = {State.W: "#ffffff", State.B: "#5b9bd5", State.G: "#70ad47", State.R: "#e04040"}


class StyleError(ValueError):
    pass


@dataclass(frozen=True)
class RenderStyle:
    fills: dict[State, str] = field(default_factory=lambda: dict(DEFAULT_FILLS))
    darken_front: bool = True
    front_fill: str = "#1f3f7a"
    radius: float = 400.0
    max_level: int | None = None
    stroke: str = "#404040"

    def fill(self, state: State, front: bool = False) -> str:
        if front and self.darken_front and state is State.B:
            return self.front_fill
        return self.fills[state]


def parse_style(text: str) -> RenderStyle:
    """``key=value`` lines: a state letter sets its fill; also ``darken_front``,
    ``front_fill``, ``radius``, ``max_level`` and ``stroke``.  Lines starting
    with ``#`` are comments, so colours may be written ``#rrggbb``."""
    fills = dict(DEFAULT_FILLS)
    kw: dict[str, object] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep:
            raise StyleError(f"line {number}: expected key=value, got {raw.strip()!r}")
        try:
            if key in "WBGR" and len(key) == 1:
                fills[State(key)] = value
            elif key == "darken_front":
                kw[key] = value.lower() in ("1", "true", "yes", "on")
            elif key == "radius":
                kw[key] = float(value)
            elif key == "max_level":
                kw[key] = None if value.lower() in ("", "none") else int(value)
            elif key in ("front_fill", "stroke"):
                kw[key] = value
            else:
                raise StyleError(f"line {number}: unknown key {key!r}")
        except ValueError as exc:
            raise StyleError(f"line {number}: {exc}") from None
    return RenderStyle(fills=fills, **kw)  # type: ignore[arg-type]


def load_style(path: str | Path) -> RenderStyle:
    return parse_style(Path(path).read_text())


def central_circumradius() -> float:
    """Euclidean distance from the origin to a vertex of the central heptagon."""
    big_r = math.acosh(1 / (math.tan(math.pi / 7) * math.tan(math.pi / 3)))
    return math.tanh(big_r / 2)


def _reflector(a: complex, b: complex):
    """Reflection of the disc in the geodesic through ``a`` and ``b``."""
    if abs(a.real * b.imag - a.imag * b.real) < 1e-14:
        u = (b - a) / abs(b - a)
        return lambda z: a + u * ((z - a) / u).conjugate()
    centre, r2 = _geodesic_circle(a, b)
    return lambda z: centre + r2 / (z - centre).conjugate()


def _geodesic_circle(a: complex, b: complex) -> tuple[complex, float]:
    """Centre and squared radius of the circle through a, b orthogonal to the unit circle."""
    # The circle passes through a, b and the inverse of a in the unit circle.
    c = a / abs(a) ** 2
    ax, ay, bx, by, cx, cy = a.real, a.imag, b.real, b.imag, c.real, c.imag
    d = 2 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    ux = ((ax * ax + ay * ay) * (by - cy) + (bx * bx + by * by) * (cy - ay) + (cx * cx + cy * cy) * (ay - by)) / d
    uy = ((ax * ax + ay * ay) * (cx - bx) + (bx * bx + by * by) * (ax - cx) + (cx * cx + cy * cy) * (bx - ax)) / d
    centre = complex(ux, uy)
    return centre, abs(a - centre) ** 2


def layout(region: Region, max_level: int | None = None) -> dict[CellId, list[complex]]:
    """Vertices of every cell up to ``max_level``, counter-clockwise.

    Side ``i`` of a cell runs from vertex ``i - 1`` to vertex ``i`` (mod 7).
    """
    r0 = central_circumradius()
    # Side k of the central cell is bisected by the ray at angle 2*pi*(k-1)/7.
    centre = [r0 * cmath.exp(1j * (2 * math.pi * (m - 0.5) / 7)) for m in range(7)]
    placed = {CENTER: centre}
    queue = deque([CENTER])
    while queue:
        cell = queue.popleft()
        verts = placed[cell]
        for i, n in enumerate(region.neighbors(cell), start=1):
            if not isinstance(n, CellId) or n in placed:
                continue
            if max_level is not None and region.level(n) > max_level:
                continue
            a, b = verts[(i - 1) % 7], verts[i % 7]
            reflect = _reflector(a, b)
            q = [reflect(v) for v in verts]
            j = region.neighbors(n).index(cell) + 1
            new = [0j] * 7
            for m in range(7):
                new[(j + m) % 7] = q[(i - 1 - m) % 7]
            new[(j - 1) % 7], new[j % 7] = b, a
            placed[n] = new
            queue.append(n)
    return placed


def locomotive_fronts(configs: Sequence[Configuration], k: int) -> set[CellId]:
    """Blue cells of step ``k`` that hold a locomotive front.

    A front is blue where the cell was not blue one step earlier; at step 0
    it is a blue cell that turns red at step 1.  Fixed blue cells never count.
    """
    now = configs[k]
    blue = {c for c, s in now.items() if s is State.B}
    if k > 0:
        before = configs[k - 1]
        return {c for c in blue if before[c] is not State.B}
    if len(configs) > 1:
        return {c for c in blue if configs[1][c] is State.R}
    return set()


def _arc(a: complex, b: complex, scale: float, origin: float) -> str:
    x, y = origin + scale * b.real, origin - scale * b.imag
    if abs(a.real * b.imag - a.imag * b.real) < 1e-12:
        return f"L {x:.4f} {y:.4f}"
    centre, r2 = _geodesic_circle(a, b)
    r = math.sqrt(r2) * scale
    u, v = a - centre, b - centre
    sweep = 1 if u.real * v.imag - u.imag * v.real > 0 else 0
    return f"A {r:.4f} {r:.4f} 0 0 {sweep} {x:.4f} {y:.4f}"


def render_svg(config: Configuration, style: RenderStyle | None = None, fronts: Iterable[CellId] = ()) -> str:
    """One SVG document, a heptagon per cell up to ``style.max_level``."""
    style = style or RenderStyle()
    fronts = set(fronts)
    region = config.region
    placed = layout(region, style.max_level)
    size = 2 * style.radius + 2
    origin = style.radius + 1
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:g}" height="{size:g}" '
        f'viewBox="0 0 {size:g} {size:g}">',
        f'<circle cx="{origin:g}" cy="{origin:g}" r="{style.radius:g}" fill="#f4f4f4" stroke="{style.stroke}"/>',
    ]
    for cell in sorted(placed):
        verts = placed[cell]
        x, y = origin + style.radius * verts[0].real, origin - style.radius * verts[0].imag
        d = [f"M {x:.4f} {y:.4f}"]
        d += [_arc(verts[m], verts[(m + 1) % 7], style.radius, origin) for m in range(7)]
        fill = style.fill(config[cell], cell in fronts)
        out.append(
            f'<path data-cell="{cell}" d="{" ".join(d)} Z" fill="{fill}" stroke="{style.stroke}" '
            f'stroke-width="0.5"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
