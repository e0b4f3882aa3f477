"""Auditing, closing and interactively building rule tables."""

from __future__ import annotations

import sys
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence, TextIO

from .engine import (
    Configuration,
    Context,
    MissingRule,
    Rule,
    RuleTable,
    State,
    Trace,
    minimal_rotated,
    rotations,
)

__all__ = [
    "REFERENCE_RAW_COUNT",
    "REFERENCE_MINIMAL_COUNT",
    "AuditReport",
    "Conflict",
    "audit_rotation_invariance",
    "close_under_rotation",
    "fired_contexts",
    "AnswersExhausted",
    "ScriptedAnswers",
    "TerminalAnswers",
    "Elicitation",
    "elicit",
    "TableDiff",
    "diff_tables",
]

# Reference counts for the 4-state table: rules as listed, and distinct minimal forms.
REFERENCE_RAW_COUNT = 1168
REFERENCE_MINIMAL_COUNT = 595


@dataclass(frozen=True)
class Conflict:
    first: Rule
    second: Rule
    minimal: Context

    def __str__(self) -> str:
        return f"{self.minimal}: {self.first.cite()} <> {self.second.cite()}"


@dataclass
class AuditReport:
    raw_rule_count: int
    minimal_form_count: int
    conflicts: list[Conflict]
    unreachable: list[Rule] | None = None
    duplicates: list[tuple[Rule, Rule]] = field(default_factory=list)

    @property
    def rotation_invariant(self) -> bool:
        return not self.conflicts

    def summary_line(self) -> str:
        return f"RAW={self.raw_rule_count} MINIMAL={self.minimal_form_count} CONFLICTS={len(self.conflicts)}"

    def discrepancies(self, raw: int = REFERENCE_RAW_COUNT, minimal: int = REFERENCE_MINIMAL_COUNT) -> list[str]:
        """Differences against expected counts, with repeated lines itemised."""
        out = []
        if self.raw_rule_count != raw:
            out.append(f"raw rule count {self.raw_rule_count} differs from {raw} by {self.raw_rule_count - raw:+d}")
            out.extend(f"  line {b.line} repeats line {a.line}: {b}" for a, b in self.duplicates)
        if self.minimal_form_count != minimal:
            out.append(
                f"minimal form count {self.minimal_form_count} differs from {minimal} "
                f"by {self.minimal_form_count - minimal:+d}"
            )
        return out

    def text(self, *, expected: bool = False) -> str:
        lines = [f"rules: {self.raw_rule_count}", f"minimal rotated forms: {self.minimal_form_count}"]
        lines.append(f"rotation conflicts: {len(self.conflicts)}")
        lines.extend(f"  conflict {c}" for c in self.conflicts)
        if self.duplicates:
            lines.append(f"repeated lines: {len(self.duplicates)}")
        if self.unreachable is not None:
            lines.append(f"rules never fired: {len(self.unreachable)}")
        if expected:
            gaps = self.discrepancies()
            lines.append(
                f"expected RAW={REFERENCE_RAW_COUNT} MINIMAL={REFERENCE_MINIMAL_COUNT}: "
                + ("match" if not gaps else "mismatch")
            )
            lines.extend(gaps)
        lines.append(self.summary_line())
        return "\n".join(lines) + "\n"


def audit_rotation_invariance(rules: Iterable[Rule], fired: set[str] | None = None) -> AuditReport:
    """Group rules by minimal rotated context and report groups that disagree.

    ``fired``, when given, holds minimal context words seen during a run; rules
    whose class is absent from it are listed as unreachable.
    """
    rules = list(rules)
    groups: dict[str, list[Rule]] = defaultdict(list)
    seen: dict[str, Rule] = {}
    duplicates = []
    for rule in rules:
        groups[rule.minimal.word].append(rule)
        if rule.word in seen:
            duplicates.append((seen[rule.word], rule))
        else:
            seen[rule.word] = rule
    conflicts = []
    for key, group in groups.items():
        first = group[0]
        other = next((r for r in group if r.result != first.result), None)
        if other is not None:
            conflicts.append(Conflict(first, other, Context(key)))
    unreachable = None
    if fired is not None:
        unreachable = [r for r in rules if r.minimal.word not in fired]
    return AuditReport(len(rules), len(groups), conflicts, unreachable, duplicates)


def close_under_rotation(table: RuleTable) -> list[Rule]:
    """Every distinct rotated form of every entry, sharing the entry's result."""
    out = []
    for ctx, result in table.minimal_forms():
        ring = ctx.word[1:]
        for r in dict.fromkeys(rotations(ring)):
            out.append(Rule(Context(ctx.word[0] + r), result))
    return out


def fired_contexts(trace: Trace | Sequence[Configuration]) -> set[str]:
    """Minimal context words evaluated while producing each step of ``trace``."""
    configs = list(trace)
    fired = set()
    for config in configs[:-1]:
        letters = config.letters() + ["W"]
        n = len(config.region)
        for i, ring in enumerate(config.region.neighbor_index):
            word = letters[i] + "".join(letters[j if j >= 0 else n] for j in ring)
            fired.add(minimal_rotated(word).word)
    return fired


class AnswersExhausted(RuntimeError):
    pass


AnswerSource = Callable[[MissingRule], State]


class ScriptedAnswers:
    """Answers read in order from a list or from a file with one state per line."""

    def __init__(self, answers: Iterable[str]):
        self._answers = [State(a.strip().upper()) for a in answers if a.strip() and not a.strip().startswith("#")]
        self.asked: list[MissingRule] = []

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedAnswers":
        return cls(Path(path).read_text().splitlines())

    def __call__(self, prompt: MissingRule) -> State:
        if len(self.asked) >= len(self._answers):
            raise AnswersExhausted(f"no scripted answer left for {prompt}")
        self.asked.append(prompt)
        return self._answers[len(self.asked) - 1]


class TerminalAnswers:
    def __init__(self, stdin: TextIO = sys.stdin, stdout: TextIO = sys.stdout):
        self.stdin, self.stdout = stdin, stdout

    def __call__(self, prompt: MissingRule) -> State:
        while True:
            self.stdout.write(f"{prompt.cell}: context {prompt.context} -> new state? [W/B/G/R] ")
            self.stdout.flush()
            line = self.stdin.readline()
            if not line:
                raise AnswersExhausted("end of input")
            try:
                return State(line.strip().upper())
            except ValueError:
                self.stdout.write("please answer W, B, G or R\n")


@dataclass
class Elicitation:
    table: RuleTable
    trace: list[Configuration]
    added: list[Rule]


def _sweep(config: Configuration, table: RuleTable, order: list[int], exact: bool):
    """One step in sweep order; returns the new configuration or the first miss."""
    region = config.region
    letters = config.letters() + ["W"]
    n = len(region)
    nbrs = region.neighbor_index
    new = ["W"] * n
    for i in order:
        word = letters[i] + "".join(letters[j if j >= 0 else n] for j in nbrs[i])
        if exact and not table.has_exact(word):
            return None, MissingRule(Context(word), region.cells[i])
        result = table.get(word)
        if result is None:
            return None, MissingRule(Context(word), region.cells[i])
        new[i] = result
    return Configuration._from_letters(region, new), None


def elicit(
    config: Configuration,
    table: RuleTable,
    steps: int,
    answers: AnswerSource,
    *,
    exact: bool = True,
) -> Elicitation:
    """Grow ``table`` until ``steps`` steps from ``config`` need no new rule.

    Cells are swept sector by sector, root to last level.  At the first cell
    whose context is not in the table the answer source supplies the new state,
    the rule is appended and the computation restarts from ``config``.  With
    ``exact`` a context only matches a rule written with the same neighbour
    order, so rotated forms are prompted for and appended separately; an
    answer that disagrees with a rotated form raises ``RuleConflictError``.
    """
    table = table.copy()
    region = config.region
    order = sorted(range(len(region)), key=lambda i: region.cells[i])
    added: list[Rule] = []
    while True:
        trace = [config]
        miss = None
        for t in range(steps):
            nxt, miss = _sweep(trace[-1], table, order, exact)
            if miss is not None:
                break
            trace.append(nxt)
        if miss is None:
            return Elicitation(table, trace, added)
        state = answers(miss)
        rule = Rule(miss.context, state, note=f"elicited at {miss.cell}, t={len(trace) - 1}")
        table.add(rule)
        added.append(rule)


@dataclass
class TableDiff:
    only_a: list[tuple[Context, State]]
    only_b: list[tuple[Context, State]]
    mismatched: list[tuple[Context, State, State]]

    @property
    def empty(self) -> bool:
        return not (self.only_a or self.only_b or self.mismatched)

    def text(self) -> str:
        lines = [f"< {c} -> {s}" for c, s in self.only_a]
        lines += [f"> {c} -> {s}" for c, s in self.only_b]
        lines += [f"! {c}: {x} <> {y}" for c, x, y in self.mismatched]
        return "\n".join(lines) + ("\n" if lines else "")


def diff_tables(a: RuleTable, b: RuleTable) -> TableDiff:
    only_a, only_b, mismatched = [], [], []
    for ctx, result in a.minimal_forms():
        other = b.entries.get(ctx.word)
        if other is None:
            only_a.append((ctx, result))
        elif other != result:
            mismatched.append((ctx, result, other))
    for ctx, result in b.minimal_forms():
        if ctx.word not in a.entries:
            only_b.append((ctx, result))
    return TableDiff(only_a, only_b, mismatched)
