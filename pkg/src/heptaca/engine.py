"""Rotation-invariant cellular automaton over sparse heptagrid configurations.

A rule is the 9-letter word ``c n1 n2 n3 n4 n5 n6 n7 -> new``.  Rules are keyed
by their *minimal rotated context*: the cell state followed by the
lexicographically smallest cyclic shift of the neighbour ring, with states
ordered ``W < B < G < R``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from .grid import CellId, Region

__all__ = [
    "State",
    "STATE_ORDER",
    "Context",
    "Rule",
    "RuleTable",
    "MissingRule",
    "MissingRuleError",
    "RuleSyntaxError",
    "RuleConflictError",
    "Configuration",
    "Trace",
    "minimal_rotated",
    "rotations",
    "parse_rules",
    "load_rules",
    "load_rule_file",
    "lookup",
    "step",
    "run",
    "evaluate",
]


class State(str, enum.Enum):
    W = "W"
    B = "B"
    G = "G"
    R = "R"

    def __str__(self) -> str:
        return self.value


STATE_ORDER = "WBGR"
_RANK = {s: i for i, s in enumerate(STATE_ORDER)}
_SORT_KEY = str.maketrans("WBGR", "0123")


@dataclass(frozen=True)
class Context:
    """Cell state and the states of neighbours 1..7, as one 8-letter word."""

    word: str

    def __post_init__(self):
        if len(self.word) != 8 or any(ch not in _RANK for ch in self.word):
            raise ValueError(f"bad context {self.word!r}")

    @classmethod
    def of(cls, cell: str, ring: Iterable[str]) -> "Context":
        return cls(str(cell) + "".join(str(s) for s in ring))

    @property
    def cell(self) -> State:
        return State(self.word[0])

    @property
    def ring(self) -> tuple[State, ...]:
        return tuple(State(ch) for ch in self.word[1:])

    def __str__(self) -> str:
        return f"{self.word[0]} {self.word[1:]}"


def rotations(ring: str) -> list[str]:
    """All 7 cyclic shifts of a neighbour ring, shift 0 first."""
    return [ring[k:] + ring[:k] for k in range(len(ring))]


@lru_cache(maxsize=1 << 16)
def _minimal_word(word: str) -> str:
    ring = word[1:]
    return word[0] + min(rotations(ring), key=lambda r: r.translate(_SORT_KEY))


def minimal_rotated(ctx: Context | str) -> Context:
    word = ctx.word if isinstance(ctx, Context) else ctx
    return Context(_minimal_word(word))


@dataclass(frozen=True)
class Rule:
    context: Context
    result: State
    line: int | None = field(default=None, compare=False)
    note: str | None = field(default=None, compare=False)

    @classmethod
    def from_word(cls, word: str, **kw) -> "Rule":
        word = word.replace(" ", "")
        if len(word) != 9:
            raise ValueError(f"a rule has 9 letters, got {word!r}")
        return cls(Context(word[:8]), State(word[8]), **kw)

    @property
    def word(self) -> str:
        return self.context.word + self.result.value

    @property
    def minimal(self) -> Context:
        return minimal_rotated(self.context)

    def __str__(self) -> str:
        return " ".join(self.word)

    def cite(self) -> str:
        where = f"line {self.line}: " if self.line is not None else ""
        return f"{where}{self}"


class RuleSyntaxError(ValueError):
    def __init__(self, line: int, text: str, reason: str):
        super().__init__(f"line {line}: {reason}: {text!r}")
        self.line = line


class RuleConflictError(ValueError):
    """Two rules with rotated contexts that disagree on the new state."""

    def __init__(self, existing: Rule, new: Rule):
        super().__init__(
            f"rotation conflict on {minimal_rotated(new.context)}: "
            f"{existing.cite()} versus {new.cite()}"
        )
        self.existing = existing
        self.new = new


@dataclass(frozen=True)
class MissingRule:
    """A context with no matching rule; ``cell`` is where it was met, if known."""

    context: Context
    cell: CellId | None = None

    def __str__(self) -> str:
        where = f"{self.cell}: " if self.cell is not None else ""
        return f"{where}no rule for {self.context}"


class RuleTable:
    """Rules indexed by minimal rotated context.

    ``rules`` keeps every accepted rule verbatim, in insertion order.
    Rotated duplicates with the same result are accepted; a rotated duplicate
    with a different result raises :class:`RuleConflictError`.
    """

    def __init__(self, rules: Iterable[Rule] = ()):
        self.entries: dict[str, State] = {}
        self.rules: list[Rule] = []
        self._first: dict[str, Rule] = {}
        self._exact: set[str] = set()
        for rule in rules:
            self.add(rule)

    def add(self, rule: Rule) -> bool:
        """Insert ``rule``; returns False when the exact rule was already present."""
        key = _minimal_word(rule.context.word)
        known = self.entries.get(key)
        if known is not None and known != rule.result:
            raise RuleConflictError(self._first[key], rule)
        if rule.context.word in self._exact:
            return False
        if known is None:
            self.entries[key] = rule.result
            self._first[key] = rule
        self._exact.add(rule.context.word)
        self.rules.append(rule)
        return True

    def copy(self) -> "RuleTable":
        return RuleTable(self.rules)

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def raw_count(self) -> int:
        return len(self.rules)

    def __contains__(self, ctx: object) -> bool:
        word = ctx.word if isinstance(ctx, Context) else ctx
        return _minimal_word(word) in self.entries

    def has_exact(self, ctx: Context | str) -> bool:
        word = ctx.word if isinstance(ctx, Context) else ctx
        return word in self._exact

    def rule_for(self, ctx: Context | str) -> Rule | None:
        """The first stored rule whose context is a rotation of ``ctx``."""
        word = ctx.word if isinstance(ctx, Context) else ctx
        return self._first.get(_minimal_word(word))

    def get(self, word: str) -> str | None:
        """Fast path on raw 8-letter words; returns the new state letter."""
        result = self.entries.get(_minimal_word(word))
        return None if result is None else result.value

    def minimal_forms(self) -> Iterator[tuple[Context, State]]:
        for key in sorted(self.entries, key=lambda w: w.translate(_SORT_KEY)):
            yield Context(key), self.entries[key]

    def to_text(self) -> str:
        lines = []
        for rule in self.rules:
            if rule.note:
                lines.append(f"# {rule.note}")
            lines.append(str(rule))
        return "\n".join(lines) + ("\n" if lines else "")


def parse_rules(text: str) -> list[Rule]:
    """Parse a rule file: 9 whitespace-separated states per line, ``#`` comments."""
    rules = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 9:
            raise RuleSyntaxError(number, raw, f"expected 9 states, found {len(tokens)}")
        bad = [t for t in tokens if t not in _RANK]
        if bad:
            raise RuleSyntaxError(number, raw, f"unknown state {bad[0]!r}")
        rules.append(Rule(Context("".join(tokens[:8])), State(tokens[8]), line=number))
    return rules


def load_rules(text: str) -> RuleTable:
    return RuleTable(parse_rules(text))


def load_rule_file(path: str | Path) -> RuleTable:
    return load_rules(Path(path).read_text())


def lookup(table: RuleTable, ctx: Context) -> State | MissingRule:
    result = table.entries.get(_minimal_word(ctx.word))
    return MissingRule(ctx) if result is None else result


class Configuration:
    """Sparse assignment of states to the cells of a region; absent means W."""

    __slots__ = ("region", "_states", "_hash")

    def __init__(self, region: Region, states: Mapping[CellId, str] | None = None):
        clean: dict[CellId, State] = {}
        for cell, state in (states or {}).items():
            state = State(state)
            if cell not in region:
                raise ValueError(f"cell {cell} is not in the region")
            if state is not State.W:
                clean[cell] = state
        self.region = region
        self._states = clean
        self._hash = None

    @classmethod
    def _from_letters(cls, region: Region, letters: list[str]) -> "Configuration":
        cfg = cls.__new__(cls)
        cfg.region = region
        cfg._states = {region.cells[i]: State(s) for i, s in enumerate(letters) if s != "W"}
        cfg._hash = None
        return cfg

    def __getitem__(self, cell: CellId) -> State:
        return self._states.get(cell, State.W)

    def items(self):
        return self._states.items()

    def __len__(self) -> int:
        return len(self._states)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.region is other.region and self._states == other._states

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._states.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"Configuration({len(self._states)} non-W cells, level {self.region.max_level})"

    def as_dict(self) -> dict[CellId, State]:
        return dict(self._states)

    def with_states(self, changes: Mapping[CellId, str]) -> "Configuration":
        merged = dict(self._states)
        merged.update(changes)
        return Configuration(self.region, merged)

    def letters(self) -> list[str]:
        out = ["W"] * len(self.region)
        for cell, state in self._states.items():
            out[self.region.index(cell)] = state.value
        return out

    def context(self, cell: CellId) -> Context:
        return Context.of(self[cell], (self[n] if isinstance(n, CellId) else "W" for n in self.region.neighbors(cell)))

    def rim_cells(self) -> list[CellId]:
        """Non-W cells lying on the outermost materialised level."""
        return sorted(c for c in self._states if self.region.is_rim(c))

    def rotated(self, shift: int = 1) -> "Configuration":
        return Configuration(self.region, {self.region.rotate(c, shift): s for c, s in self._states.items()})


class MissingRuleError(LookupError):
    """Raised by :func:`step` when some cell has no applicable rule."""

    def __init__(self, missing: list[MissingRule]):
        self.missing = missing
        shown = "; ".join(str(m) for m in missing[:5])
        more = f" (+{len(missing) - 5} more)" if len(missing) > 5 else ""
        super().__init__(f"{len(missing)} cell(s) without a rule: {shown}{more}")

    @property
    def contexts(self) -> list[Context]:
        """Distinct missing contexts, in order of first appearance."""
        seen: dict[str, Context] = {}
        for m in self.missing:
            seen.setdefault(m.context.word, m.context)
        return list(seen.values())


def _padded_neighbors(region: Region) -> list[tuple[int, ...]]:
    cache = getattr(region, "_padded", None)
    if cache is None:
        n = len(region)
        cache = [tuple(j if j >= 0 else n for j in ring) for ring in region.neighbor_index]
        region._padded = cache
    return cache


def step(config: Configuration, table: RuleTable) -> Configuration:
    """One synchronous update of every region cell.

    Exterior neighbours read as W and are never updated.  If any cell has no
    rule, nothing is updated and :class:`MissingRuleError` lists all of them.
    """
    region = config.region
    letters = config.letters()
    letters.append("W")
    nbrs = _padded_neighbors(region)
    entries = table.entries
    new = ["W"] * len(region)
    missing: list[MissingRule] = []

    active = set()
    for cell in config._states:
        i = region.index(cell)
        active.add(i)
        active.update(j for j in region.neighbor_index[i] if j >= 0)

    quiet = entries.get("W" * 8)
    if quiet is None:
        quiescent_cells = [i for i in range(len(region)) if i not in active]
        missing.extend(MissingRule(Context("W" * 8), region.cells[i]) for i in quiescent_cells)
    elif quiet is not State.W:
        for i in range(len(region)):
            if i not in active:
                new[i] = quiet.value

    for i in sorted(active):
        word = letters[i] + "".join(letters[j] for j in nbrs[i])
        result = entries.get(_minimal_word(word))
        if result is None:
            missing.append(MissingRule(Context(word), region.cells[i]))
        else:
            new[i] = result.value
    if missing:
        missing.sort(key=lambda m: m.cell)
        raise MissingRuleError(missing)
    return Configuration._from_letters(region, new)


def evaluate(config: Configuration, table: RuleTable, cells: Iterable[CellId]) -> dict[CellId, State | MissingRule]:
    """New state of each of ``cells`` alone, without updating the rest of the region."""
    out: dict[CellId, State | MissingRule] = {}
    for cell in cells:
        ctx = config.context(cell)
        out[cell] = lookup(table, ctx)
        if isinstance(out[cell], MissingRule):
            out[cell] = MissingRule(ctx, cell)
    return out


@dataclass
class Trace:
    """Configurations ``trace[0] .. trace[k]`` and why the run stopped early, if it did."""

    configs: list[Configuration]
    missing: MissingRuleError | None = None
    rim_contact: list[CellId] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.configs)

    def __getitem__(self, k: int) -> Configuration:
        return self.configs[k]

    def __iter__(self):
        return iter(self.configs)

    @property
    def complete(self) -> bool:
        return self.missing is None and not self.rim_contact


def run(config: Configuration, table: RuleTable, steps: int, *, guard_rim: bool = True) -> Trace:
    """Iterate :func:`step`; stop early on a missing rule or, if guarded, on rim contact."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    trace = Trace([config])
    if guard_rim and config.rim_cells():
        trace.rim_contact = config.rim_cells()
        return trace
    for _ in range(steps):
        try:
            config = step(config, table)
        except MissingRuleError as exc:
            trace.missing = exc
            break
        trace.configs.append(config)
        if guard_rim and config.rim_cells():
            trace.rim_contact = config.rim_cells()
            break
    return trace
