"""Plain-text configuration and trace files.

Configuration lines are ``C <state>`` or ``<sector>:<nu> <state>``; cells not
listed are W.  A trace is a sequence of configurations, each introduced by a
``== t=<k> ==`` header.  A ``# level=<L>`` comment records the region size.
"""

from __future__ import annotations

import re
from typing import Iterable

from .engine import Configuration, State
from .fibonacci import level_of
from .grid import CellId, Region, parse_cell

_HEADER = re.compile(r"^==\s*t=(\d+)\s*==$")
_LEVEL = re.compile(r"^#\s*level\s*=\s*(\d+)")


class FormatError(ValueError):
    pass


def format_configuration(config: Configuration) -> str:
    return "".join(f"{cell} {state.value}\n" for cell, state in sorted(config.items()))


def _parse_assignment(lines: Iterable[tuple[int, str]]) -> dict[CellId, State]:
    states: dict[CellId, State] = {}
    for number, raw in lines:
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {number}: expected '<cell> <state>', got {raw!r}")
        try:
            cell = parse_cell(parts[0])
            state = State(parts[1])
        except ValueError as exc:
            raise FormatError(f"line {number}: {exc}") from None
        states[cell] = state
    return states


def declared_level(text: str) -> int | None:
    for line in text.splitlines():
        m = _LEVEL.match(line.strip())
        if m:
            return int(m.group(1))
    return None


def parse_configuration(text: str, region: Region) -> Configuration:
    states = _parse_assignment(enumerate(text.splitlines(), start=1))
    outside = [c for c in states if c not in region]
    if outside:
        raise FormatError(f"cell {outside[0]} lies outside a level-{region.max_level} region")
    return Configuration(region, states)


def format_trace(configs: Iterable[Configuration], level: int | None = None) -> str:
    parts = []
    if level is not None:
        parts.append(f"# level={level}\n")
    for k, config in enumerate(configs):
        parts.append(f"== t={k} ==\n")
        parts.append(format_configuration(config))
    return "".join(parts)


def parse_trace(text: str, region: Region) -> list[Configuration]:
    blocks: list[list[tuple[int, str]]] = []
    for number, line in enumerate(text.splitlines(), start=1):
        m = _HEADER.match(line.strip())
        if m:
            if int(m.group(1)) != len(blocks):
                raise FormatError(f"line {number}: expected t={len(blocks)}")
            blocks.append([])
        elif blocks:
            blocks[-1].append((number, line))
        elif line.split("#", 1)[0].strip():
            raise FormatError(f"line {number}: content before the first '== t=0 ==' header")
    configs = []
    for block in blocks:
        states = _parse_assignment(block)
        outside = [c for c in states if c not in region]
        if outside:
            raise FormatError(f"cell {outside[0]} lies outside a level-{region.max_level} region")
        configs.append(Configuration(region, states))
    return configs


def infer_level(text: str) -> int:
    """Smallest region level containing every cell named in ``text``."""
    level = declared_level(text)
    if level is not None:
        return level
    deepest = 0
    for line in text.splitlines():
        token = line.split("#", 1)[0].split()
        if token and ":" in token[0]:
            try:
                deepest = max(deepest, level_of(parse_cell(token[0]).nu))
            except ValueError:
                continue
    return deepest
