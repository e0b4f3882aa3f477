from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heptaca.engine import Configuration
from heptaca.formats import (
    FormatError,
    declared_level,
    format_configuration,
    format_trace,
    infer_level,
    parse_configuration,
    parse_trace,
)
from heptaca.grid import CellId

from conftest import region

_CONFIG = st.dictionaries(st.sampled_from(region(2).cells), st.sampled_from("WBGR"), max_size=12)


@settings(max_examples=80)
@given(_CONFIG)
def test_configuration_round_trip(states):
    c = Configuration(region(2), states)
    assert parse_configuration(format_configuration(c), region(2)) == c


@settings(max_examples=40)
@given(st.lists(_CONFIG, min_size=1, max_size=4))
def test_trace_round_trip(states):
    configs = [Configuration(region(2), s) for s in states]
    text = format_trace(configs, level=2)
    assert declared_level(text) == 2
    assert parse_trace(text, region(2)) == configs


def test_infer_level_from_deepest_cell():
    assert infer_level("C B\n1:1 G\n") == 0
    assert infer_level("3:13 R  # level 3 starts at node 13\n") == 3
    assert infer_level("# level=5\n1:1 B\n") == 5


def test_errors_carry_line_numbers():
    with pytest.raises(FormatError, match="line 2"):
        parse_configuration("1:1 B\n1:2\n", region(2))
    with pytest.raises(FormatError, match="line 1"):
        parse_configuration("1:1 Q\n", region(2))
    with pytest.raises(FormatError, match="outside"):
        parse_configuration("1:40 B\n", region(2))
    with pytest.raises(FormatError, match="expected t=1"):
        parse_trace("== t=0 ==\n== t=2 ==\n", region(1))
    with pytest.raises(FormatError, match="before"):
        parse_trace("1:1 B\n== t=0 ==\n", region(1))


def test_blank_states_are_not_written():
    c = Configuration(region(1), {CellId(1, 1): "W", CellId(2, 2): "R"})
    assert format_configuration(c) == "2:2 R\n"
