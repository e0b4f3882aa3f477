from __future__ import annotations

import csv

from heptaca.engine import Configuration, run
from heptaca.railway.scenario import SCENARIOS, build_scene
from heptaca.report import CSV_NAME, PNG_NAME, spacetime_columns, step_rows, write_report

from conftest import region


def test_step_rows_count_states_and_changes(fixture_table):
    scene = build_scene(SCENARIOS["straight-track"], fixture_table)
    trace = run(scene.config, fixture_table, 3)
    rows = step_rows(trace.configs)
    assert [r["changed"] for r in rows] == [0, 3, 3, 3]
    assert all(sum(r[s] for s in "WBGR") == len(scene.region) for r in rows)
    assert all(r["R"] == 1 for r in rows)


def test_quiescent_columns_are_empty():
    configs = [Configuration(region(1))] * 3
    assert spacetime_columns(configs) == []
    assert step_rows(configs)[-1] == {"t": 2, "W": 29, "B": 0, "G": 0, "R": 0, "changed": 0}


def test_write_report(tmp_path, fixture_table):
    scene = build_scene(SCENARIOS["straight-track"], fixture_table)
    trace = run(scene.config, fixture_table, 4)
    csv_path, png_path = write_report(trace.configs, tmp_path / "rep", order=scene.path.s3)
    assert csv_path.name == CSV_NAME and png_path.name == PNG_NAME
    with csv_path.open() as fh:
        assert len(list(csv.DictReader(fh))) == 5
    assert png_path.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
