from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heptaca.engine import State, run
from heptaca.grid import CellId
from heptaca.railway.scenario import SCENARIOS, Scenario, ScenarioError, build_scene, load_scenario, parse_scenario


def test_parse_scenario_file():
    sc = parse_scenario("# ring\nkind=horizontal\nlevel = 7\nanchor=1:34\nlocomotive=10\nheading=-1\n")
    assert sc == Scenario("horizontal", level=7, anchor=CellId(1, 34), locomotive=10, heading=-1)


@pytest.mark.parametrize("name", list(SCENARIOS))
def test_builtin_scenarios_round_trip(name):
    sc = SCENARIOS[name]
    assert parse_scenario(sc.to_text()) == sc


@settings(max_examples=30)
@given(
    st.sampled_from(["horizontal", "vertical", "sliproad"]),
    st.integers(1, 9),
    st.integers(1, 7),
    st.integers(1, 60),
    st.one_of(st.none(), st.integers(1, 20)),
    st.text(alphabet="+-", max_size=5),
)
def test_parse_inverts_to_text(kind, level, sector, nu, span, turns):
    sc = Scenario(kind, level=level, anchor=CellId(sector, nu), span=span, turns=turns)
    assert parse_scenario(sc.to_text()) == sc


@pytest.mark.parametrize(
    "text,match",
    [
        ("level=3\n", "no kind"),
        ("kind=teleporter\n", "unknown scenario kind"),
        ("kind=switch-fixed-up\n", "unknown switch"),
        ("kind=horizontal\n", "anchor"),
        ("kind=quiescent\nlevel=x\n", "integer"),
        ("kind=quiescent\ncolour=blue\n", "line 2"),
        ("kind=horizontal\nanchor=9:1\n", "line 2"),
        ("kind=quiescent\nheading=2\n", "heading"),
    ],
)
def test_bad_scenarios(text, match):
    with pytest.raises(ScenarioError, match=match):
        parse_scenario(text)


def test_load_by_name_or_file(tmp_path):
    assert load_scenario("quiescent") is SCENARIOS["quiescent"]
    f = tmp_path / "s.txt"
    f.write_text("kind=quiescent\nlevel=2\n")
    assert load_scenario(f).level == 2
    with pytest.raises(ScenarioError):
        load_scenario(tmp_path / "missing.txt")


def test_straight_track_scene(fixture_table):
    scene = build_scene(SCENARIOS["straight-track"], fixture_table)
    path = scene.path
    assert scene.config[path.s3[10]] is State.B and scene.config[path.s3[9]] is State.R
    trace = run(scene.config, fixture_table, 5)
    assert trace.complete
    assert trace[5][path.s3[15]] is State.B


def test_segment_scene_is_trimmed(fixture_table):
    scene = build_scene(SCENARIOS["segment"], fixture_table)
    assert scene.path.trimmed and any("blanked" in n for n in scene.notes)
    assert run(scene.config, fixture_table, 4).complete


def test_junction_scene(fixture_table):
    scene = build_scene(SCENARIOS["switch-fixed-left"], fixture_table)
    assert scene.junction is not None and scene.junction.ok
    assert run(scene.config, fixture_table, 3).complete
