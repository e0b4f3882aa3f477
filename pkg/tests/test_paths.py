from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heptaca.engine import State
from heptaca.grid import CellId
from heptaca.railway.paths import (
    PathError,
    PathKind,
    PathSpec,
    build_path,
    locomotive_at,
    motion_period,
    oracle_motion_1d,
    place_locomotive,
    remove_locomotive,
    trim_ends,
)

from conftest import region

RING = PathSpec(PathKind.HORIZONTAL, CellId(1, 34))


@pytest.fixture(scope="module")
def ring():
    return build_path(RING, region(7))


def _brute_line(line: list[str], steps: int, direction: int) -> list[str]:
    # Move the pair explicitly: the front advances into the blank ahead and
    # the rear follows, unless the front would leave the line.
    cells = list(line)
    for _ in range(steps):
        if "B" not in cells:
            break
        front = cells.index("B")
        rear = cells.index("R")
        ahead = front + direction
        if not 0 <= ahead < len(cells):
            # The front stays; the rear catches up and vanishes into it.
            cells[rear] = "W"
            continue
        cells[ahead], cells[front], cells[rear] = "B", "R", "W"
    return cells


def test_ring_tracks_are_disjoint_and_milestoned(ring):
    assert ring.closed and len(ring.s3) == len(region(7).level_cells(4))
    assert ring.track_violations() == []
    assert ring.milestones and ring.milestones <= ring.s4


def test_ring_is_idle(fixture_table, ring):
    assert ring.idle_report(fixture_table).fixed


@pytest.mark.parametrize("direction", [1, -1])
def test_ring_motion(fixture_table, ring, direction):
    report = motion_period(ring, fixture_table, 10, direction, periods=10)
    assert report.ok and report.period == 1 and report.periods == 10


def test_locomotive_placement(ring):
    c = locomotive_at(ring, 5, -1)
    assert c[ring.s3[5]] is State.B and c[ring.s3[6]] is State.R
    assert remove_locomotive(c, ring) == ring.idle()
    with pytest.raises(PathError):
        place_locomotive(ring.idle(), ring, 5, 0)
    assert ring.index(len(ring.s3) + 2) == ring.s3[2]


def test_open_segment_needs_trimmed_ends(fixture_table):
    seg = build_path(PathSpec(PathKind.HORIZONTAL, CellId(1, 34), span=16), region(7))
    assert not seg.closed and not seg.idle_report(fixture_table).fixed
    removed = trim_ends(seg, fixture_table)
    assert removed and seg.idle_report(fixture_table).fixed
    assert seg.track_violations() == []
    for direction in (1, -1):
        assert motion_period(seg, fixture_table, 6, direction, periods=3).ok


@pytest.mark.parametrize("anchor", [CellId(1, 2), CellId(2, 2), CellId(1, 5)])
def test_vertical_is_idle(fixture_table, anchor):
    path = build_path(PathSpec(PathKind.VERTICAL, anchor, span=3), region(8))
    assert path.idle_report(fixture_table).fixed
    assert path.s2 and path.s1 and len(path.s3) >= 5


def test_vertical_interior_motion(fixture_table):
    path = build_path(PathSpec(PathKind.VERTICAL, CellId(1, 2), span=4), region(8))
    assert [str(c) for c in path.s3[:4]] == ["1:3", "1:7", "1:6", "1:15"]
    for direction in (1, -1):
        report = motion_period(path, fixture_table, 4, direction, periods=1)
        assert report.ok


def test_vertical_end_reports_missing_rules(fixture_table):
    path = build_path(PathSpec(PathKind.VERTICAL, CellId(1, 2), span=4), region(8))
    report = motion_period(path, fixture_table, 1, 1)
    assert not report.ok and report.missing
    assert all(m.context not in fixture_table for m in report.missing)


def test_sliproad_is_idle(fixture_table):
    path = build_path(PathSpec(PathKind.SLIPROAD, CellId(1, 3), span=3, direction=1, turns="+-+"), region(7))
    assert len(path.s3) == 5 and path.idle_report(fixture_table).fixed


def test_path_errors():
    r = region(5)
    with pytest.raises(PathError, match="level 2 or deeper"):
        build_path(PathSpec(PathKind.HORIZONTAL, CellId(1, 1)), r)
    with pytest.raises(PathError, match="blank levels"):
        build_path(PathSpec(PathKind.HORIZONTAL, CellId(1, 34)), r)
    with pytest.raises(PathError, match="white"):
        build_path(PathSpec(PathKind.VERTICAL, CellId(1, 1)), r)
    with pytest.raises(PathError, match="leaves the region"):
        build_path(PathSpec(PathKind.VERTICAL, CellId(1, 2)), r)
    with pytest.raises(PathError, match="outside"):
        build_path(PathSpec(PathKind.HORIZONTAL, CellId(1, 900)), r)
    with pytest.raises(PathError, match="turns"):
        build_path(PathSpec(PathKind.SLIPROAD, CellId(1, 3), direction=1, turns="+x"), r)


def _line(n: int, front: int, direction: int) -> list[str]:
    cells = ["W"] * n
    cells[front], cells[front - direction] = "B", "R"
    return cells


@pytest.mark.parametrize("direction", [1, -1])
def test_motion_oracle_on_a_30_cell_line(direction):
    start = 2 if direction == 1 else 27
    line = _line(30, start, direction)
    for k in range(26):
        assert oracle_motion_1d(line, k, direction) == _line(30, start + k * direction, direction)


@settings(max_examples=100)
@given(st.integers(5, 40), st.data(), st.sampled_from([1, -1]))
def test_motion_oracle_matches_brute_force(n, data, direction):
    front = data.draw(st.integers(1, n - 2))
    steps = data.draw(st.integers(0, n))
    line = _line(n, front, direction)
    reach = (n - 1 - front) if direction == 1 else front
    steps = min(steps, reach)
    assert oracle_motion_1d(line, steps, direction) == _brute_line(line, steps, direction)


def test_motion_oracle_rejects_bad_lines():
    with pytest.raises(ValueError):
        oracle_motion_1d(["W", "G"], 1)
    with pytest.raises(ValueError):
        oracle_motion_1d(["B", "B", "R"], 1)
    with pytest.raises(ValueError):
        oracle_motion_1d(["B", "R"], 1, direction=2)
