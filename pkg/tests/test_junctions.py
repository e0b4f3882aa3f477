from __future__ import annotations

import itertools

import pytest

from heptaca.engine import State
from heptaca.grid import CENTER, CellId
from heptaca.railway.circuit import Branch
from heptaca.railway.junctions import (
    Frame,
    JunctionError,
    JunctionKind,
    JunctionSpec,
    build_junction,
    junction_cell,
)

from conftest import region


@pytest.mark.parametrize("kind,side", list(itertools.product(JunctionKind, Branch)))
def test_candidates_meet_every_constraint(fixture_table, kind, side):
    cand = build_junction(JunctionSpec(kind, side), region(5), fixture_table)
    assert cand.ok, cand.report()
    assert cand.config[CENTER] is State.W
    assert cand.idle.fixed
    assert "idle inside the search ball: True" in cand.report()


def test_crossing_gap_places_the_greens(fixture_table):
    cand = build_junction(JunctionSpec(JunctionKind.CROSSING, gap=3), region(5), fixture_table)
    greens = [k + 1 for k, n in enumerate(region(5).neighbors(CENTER)) if cand.config[n] is State.G]
    assert greens == [4, 7] and cand.ok


def test_flip_flop_marker_is_red(fixture_table):
    r = region(5)
    cand = build_junction(JunctionSpec(JunctionKind.FLIP_FLOP), r, fixture_table)
    assert cand.config[junction_cell(r, CENTER, "2(1)")] is State.R
    ring = [cand.config[n] for n in r.neighbors(CENTER)]
    assert ring.count(State.G) == 5


def test_junction_coordinates():
    r = region(4)
    centre = CellId(1, 3)
    ring = r.neighbors(centre)
    assert [junction_cell(r, centre, f"1({s})") for s in range(1, 8)] == list(ring)
    marker = junction_cell(r, centre, "2(1)")
    assert marker in r.neighbors(ring[0]) and marker not in ring and marker != centre
    assert junction_cell(r, CENTER, "2(3)", Frame.SECTOR) == CellId(3, 2)
    for bad in ("3(1)", "2(2)", "x"):
        with pytest.raises(JunctionError):
            junction_cell(r, centre, bad)


def test_template_outside_region_is_reported(fixture_table):
    cand = build_junction(JunctionSpec(JunctionKind.CROSSING, centre=CellId(1, 1)), region(1), fixture_table)
    assert cand.config is None and not cand.ok
    assert "no candidate" in cand.report()


def test_search_is_deterministic(fixture_table):
    spec = JunctionSpec(JunctionKind.MEMORY, Branch.RIGHT)
    a = build_junction(spec, region(5), fixture_table)
    b = build_junction(spec, region(5), fixture_table)
    assert a.config == b.config and a.explored == b.explored
