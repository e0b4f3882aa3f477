from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from heptaca.fibonacci import (
    FibDigits,
    cumulative_population,
    fib,
    from_fib,
    level_bounds,
    level_of,
    level_population,
    to_maximal_fib,
)


def _brute_levels(limit: int) -> list[int]:
    # Grow one sector tree by arity alone: white -> B W W, black -> B W.
    level, out = ["W"], []
    while len(out) < limit:
        out.append(len(level))
        level = [s for k in level for s in (("B", "W", "W") if k == "W" else ("B", "W"))]
    return out


def test_first_terms():
    assert [fib(n) for n in range(1, 11)] == [1, 2, 3, 5, 8, 13, 21, 34, 55, 89]


def test_level_population_matches_tree_growth():
    assert [level_population(k) for k in range(9)] == _brute_levels(9)


def test_cumulative_and_bounds():
    assert [cumulative_population(k) for k in range(4)] == [1, 4, 12, 33]
    assert level_bounds(0) == (1, 1)
    assert level_bounds(2) == (5, 12)


@given(st.integers(min_value=1, max_value=10**6))
def test_greedy_representation_round_trips(n):
    d = to_maximal_fib(n)
    assert from_fib(d) == n
    assert "11" not in d.digits and d.digits.startswith("1")


@given(st.integers(min_value=1, max_value=5000))
def test_level_of_agrees_with_bounds(nu):
    lo, hi = level_bounds(level_of(nu))
    assert lo <= nu <= hi


def test_invalid_inputs():
    with pytest.raises(ValueError):
        fib(0)
    with pytest.raises(ValueError):
        FibDigits("0110", 0)
    with pytest.raises(ValueError):
        level_of(0)
    with pytest.raises(ValueError):
        from_fib("12")
