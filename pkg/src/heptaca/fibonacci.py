"""Fibonacci numeration used to address nodes of the sector trees.

The sequence is indexed from ``f(1) = 1``, ``f(2) = 2``, so that level ``n``
of a sector tree holds ``f(2n + 1)`` nodes.  Node numbers are written in the
maximal (greedy) representation over that basis, most significant digit first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "FibDigits",
    "fib",
    "level_population",
    "cumulative_population",
    "to_maximal_fib",
    "from_fib",
    "level_of",
    "level_bounds",
]


@dataclass(frozen=True)
class FibDigits:
    """A node number together with its digit string (MSB first)."""

    digits: str
    value: int

    def __post_init__(self):
        if "11" in self.digits:
            raise ValueError(f"adjacent ones in {self.digits!r}")
        if self.digits and self.digits[0] != "1":
            raise ValueError(f"leading zero in {self.digits!r}")

    def __str__(self) -> str:
        return self.digits


@lru_cache(maxsize=None)
def fib(n: int) -> int:
    if n < 1:
        raise ValueError(f"Fibonacci index starts at 1, got {n}")
    a, b = 1, 2
    for _ in range(n - 1):
        a, b = b, a + b
    return a


def level_population(level: int) -> int:
    """Number of nodes on ``level`` of one sector tree."""
    if level < 0:
        raise ValueError(f"negative level {level}")
    return fib(2 * level + 1)


def cumulative_population(level: int) -> int:
    """Number of nodes on levels ``0..level`` of one sector tree."""
    return sum(level_population(k) for k in range(level + 1))


def _basis_upto(n: int) -> list[int]:
    basis = [1]
    k = 2
    while fib(k) <= n:
        basis.append(fib(k))
        k += 1
    return basis


def to_maximal_fib(n: int) -> FibDigits:
    """Greedy representation of ``n``: take the largest ``f(k) <= rest`` each time."""
    if n < 0:
        raise ValueError(f"cannot represent negative number {n}")
    if n == 0:
        return FibDigits("", 0)
    basis = _basis_upto(n)
    rest = n
    digits = []
    for f in reversed(basis):
        if f <= rest:
            digits.append("1")
            rest -= f
        else:
            digits.append("0")
    return FibDigits("".join(digits).lstrip("0"), n)


def from_fib(d: FibDigits | str) -> int:
    digits = d.digits if isinstance(d, FibDigits) else d
    if any(ch not in "01" for ch in digits):
        raise ValueError(f"not a binary digit string: {digits!r}")
    return sum(fib(k + 1) for k, ch in enumerate(reversed(digits)) if ch == "1")


def level_bounds(level: int) -> tuple[int, int]:
    """First and last node number on ``level`` (inclusive)."""
    first = cumulative_population(level - 1) + 1 if level > 0 else 1
    return first, first + level_population(level) - 1


def level_of(nu: int) -> int:
    """Level of node ``nu`` in a sector tree (the root is node 1, level 0)."""
    if nu < 1:
        raise ValueError("node numbers start at 1; 0 is the central cell")
    level, total = 0, 1
    while nu > total:
        level += 1
        total += level_population(level)
    return level
