"""Run reports: a per-step CSV and a space-time picture."""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Sequence

from .engine import STATE_ORDER, Configuration, State
from .grid import CellId

__all__ = ["CSV_NAME", "PNG_NAME", "step_rows", "spacetime_columns", "write_report"]

CSV_NAME = "steps.csv"
PNG_NAME = "spacetime.png"


def step_rows(configs: Sequence[Configuration]) -> list[dict[str, int]]:
    """State counts and number of changed cells for every step."""
    rows = []
    for t, config in enumerate(configs):
        counts = dict.fromkeys(STATE_ORDER, 0)
        live = {cell: state for cell, state in config.items() if state is not State.W}
        for state in live.values():
            counts[state.value] += 1
        counts["W"] = len(config.region) - len(live)
        changed = 0
        if t:
            before = configs[t - 1]
            touched = set(live) | {cell for cell, state in before.items() if state is not State.W}
            changed = sum(1 for cell in touched if config[cell] is not before[cell])
        rows.append({"t": t, **counts, "changed": changed})
    return rows


def spacetime_columns(configs: Sequence[Configuration], order: Sequence[CellId] | None = None) -> list[CellId]:
    """Cells shown in the picture: ``order`` if given, else every cell ever non-blank."""
    if order is not None:
        return list(order)
    seen = set()
    for config in configs:
        seen.update(c for c, s in config.items() if s is not State.W)
    return sorted(seen)


def write_report(
    configs: Sequence[Configuration],
    out_dir: str | Path,
    *,
    order: Sequence[CellId] | None = None,
    title: str = "",
) -> tuple[Path, Path]:
    """Write ``steps.csv`` and ``spacetime.png`` into ``out_dir``.

    The picture has one row per step and one column per cell of ``order``.
    """
    import matplotlib

    matplotlib.use("Agg")
    from matplotlib import pyplot as plt
    from matplotlib.colors import ListedColormap

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path, png_path = out / CSV_NAME, out / PNG_NAME
    rows = step_rows(configs)
    with csv_path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)

    columns = spacetime_columns(configs, order)
    code = {s: k for k, s in enumerate(STATE_ORDER)}
    image = [[code[c[cell].value] for cell in columns] or [0] for c in configs]
    cmap = ListedColormap(["#ffffff", "#5b9bd5", "#70ad47", "#e04040"])
    width = min(16.0, 2 + 0.12 * max(1, len(columns)))
    height = min(12.0, 2 + 0.12 * len(configs))
    fig, ax = plt.subplots(figsize=(width, height))
    ax.imshow(image, cmap=cmap, vmin=0, vmax=3, aspect="auto", interpolation="nearest")
    ax.set_xlabel(f"cell ({len(columns)} shown)")
    ax.set_ylabel("step")
    if len(columns) <= 40:
        ax.set_xticks(range(len(columns)))
        ax.set_xticklabels([str(c) for c in columns], rotation=90, fontsize=6)
    ax.set_title(title or "space-time diagram")
    fig.tight_layout()
    fig.savefig(png_path, dpi=100, metadata={"Software": None})
    plt.close(fig)
    return csv_path, png_path
