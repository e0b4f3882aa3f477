"""Abstract railway circuits: switches, wiring and a single-locomotive walker.

Every switch has three terminals: ``u`` on one side, ``a`` (left) and ``b``
(right) on the other.  Going from ``u`` to a branch is an active crossing,
going from a branch to ``u`` a passive one.  Tracks are undirected links
between terminals; the locomotive may run along them either way.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Mapping

__all__ = [
    "SwitchKind",
    "Branch",
    "Entry",
    "SwitchState",
    "CircuitError",
    "ModelViolation",
    "BudgetExhausted",
    "cross_switch",
    "CircuitGraph",
    "CircuitRun",
    "run_circuit",
    "parse_circuit",
    "elementary_circuit",
    "register_unit",
    "bit_of",
]


class SwitchKind(enum.Enum):
    FIXED = "fixed"
    FLIP_FLOP = "flipflop"
    MEMORY = "memory"


class Branch(enum.Enum):
    LEFT = "a"
    RIGHT = "b"

    @property
    def other(self) -> "Branch":
        return Branch.RIGHT if self is Branch.LEFT else Branch.LEFT


class Entry(enum.Enum):
    FROM_U = "u"
    FROM_SELECTED = "selected"
    FROM_NON_SELECTED = "non-selected"


@dataclass(frozen=True)
class SwitchState:
    kind: SwitchKind
    selected: Branch


class CircuitError(ValueError):
    pass


class ModelViolation(CircuitError):
    """The locomotive used a switch in a way the model forbids."""


class BudgetExhausted(CircuitError):
    pass


def cross_switch(s: SwitchState, entry: Entry) -> tuple[str, SwitchState]:
    """Exit terminal (``"u"``, ``"a"`` or ``"b"``) and the switch state afterwards."""
    if entry is Entry.FROM_U:
        out = s.selected.value
        if s.kind is SwitchKind.FLIP_FLOP:
            return out, replace(s, selected=s.selected.other)
        return out, s
    if s.kind is SwitchKind.FLIP_FLOP:
        raise ModelViolation("a flip-flop switch is crossed actively only")
    if s.kind is SwitchKind.MEMORY and entry is Entry.FROM_NON_SELECTED:
        return "u", replace(s, selected=s.selected.other)
    return "u", s


Terminal = tuple[str, str]


@dataclass
class CircuitGraph:
    """Switches, ports and joints wired by links between terminals.

    Ports have one terminal ``p``; joints have two, ``p`` and ``q``, and pass
    the locomotive straight through.
    """

    switches: dict[str, SwitchState] = field(default_factory=dict)
    ports: list[str] = field(default_factory=list)
    joints: list[str] = field(default_factory=list)
    links: dict[Terminal, Terminal] = field(default_factory=dict)

    def _terminals(self, node: str) -> tuple[str, ...]:
        if node in self.switches:
            return ("u", "a", "b")
        if node in self.ports:
            return ("p",)
        if node in self.joints:
            return ("p", "q")
        raise CircuitError(f"unknown node {node!r}")

    def _add_node(self, name: str) -> None:
        if name in self.switches or name in self.ports or name in self.joints:
            raise CircuitError(f"duplicate node {name!r}")

    def switch(self, name: str, kind: SwitchKind, selected: Branch) -> "CircuitGraph":
        self._add_node(name)
        self.switches[name] = SwitchState(kind, selected)
        return self

    def port(self, *names: str) -> "CircuitGraph":
        for name in names:
            self._add_node(name)
            self.ports.append(name)
        return self

    def joint(self, name: str) -> "CircuitGraph":
        self._add_node(name)
        self.joints.append(name)
        return self

    def link(self, x: str, y: str) -> "CircuitGraph":
        """Join two terminals written ``node.terminal``; a bare port name means ``port.p``."""
        tx, ty = self._parse_terminal(x), self._parse_terminal(y)
        for t in (tx, ty):
            if t in self.links:
                raise CircuitError(f"terminal {t[0]}.{t[1]} is already linked")
        if tx == ty:
            raise CircuitError(f"terminal {x} linked to itself")
        self.links[tx] = ty
        self.links[ty] = tx
        return self

    def _parse_terminal(self, text: str) -> Terminal:
        node, _, term = text.partition(".")
        term = term or "p"
        if term not in self._terminals(node):
            raise CircuitError(f"node {node!r} has no terminal {term!r}")
        return node, term

    def check(self) -> list[str]:
        """Wiring problems; ports may stay unlinked, switch and joint terminals may not."""
        problems = []
        for name in list(self.switches) + self.joints:
            for term in self._terminals(name):
                if (name, term) not in self.links:
                    problems.append(f"{name}.{term} is not linked")
        return problems


@dataclass
class CircuitRun:
    exit: str
    states: dict[str, SwitchState]
    visited: list[tuple[str, str, str]]


def run_circuit(
    g: CircuitGraph,
    entry: str,
    states: Mapping[str, SwitchState] | None = None,
    *,
    budget: int = 10_000,
) -> CircuitRun:
    """Send the locomotive in at port ``entry`` and follow it to an exit port.

    ``visited`` lists ``(switch, entered terminal, exit terminal)`` for every
    switch crossing, in order.
    """
    problems = g.check()
    if problems:
        raise CircuitError("; ".join(problems))
    if entry not in g.ports:
        raise CircuitError(f"{entry!r} is not a port")
    current = dict(g.switches)
    if states:
        current.update(states)
    visited = []
    here: Terminal = (entry, "p")
    for _ in range(budget):
        nxt = g.links.get(here)
        if nxt is None:
            raise CircuitError(f"track ends at unlinked terminal {here[0]}.{here[1]}")
        node, term = nxt
        if node in g.ports:
            return CircuitRun(node, current, visited)
        if node in g.joints:
            here = (node, "q" if term == "p" else "p")
            continue
        s = current[node]
        if term == "u":
            how = Entry.FROM_U
        elif term == s.selected.value:
            how = Entry.FROM_SELECTED
        else:
            how = Entry.FROM_NON_SELECTED
        try:
            out, current[node] = cross_switch(s, how)
        except ModelViolation as exc:
            raise ModelViolation(f"{node}: {exc} (entered at {term})") from None
        visited.append((node, term, out))
        here = (node, out)
    raise BudgetExhausted(f"no exit reached within {budget} crossings")


_KINDS = {k.value: k for k in SwitchKind} | {"flip-flop": SwitchKind.FLIP_FLOP}
_SIDES = {"a": Branch.LEFT, "left": Branch.LEFT, "b": Branch.RIGHT, "right": Branch.RIGHT}


def parse_circuit(text: str) -> CircuitGraph:
    """Read a circuit description.

    Lines are ``switch NAME fixed|flipflop|memory a|b``, ``port NAME...``,
    ``joint NAME`` and ``edge X.t Y.t``; ``#`` starts a comment.
    """
    g = CircuitGraph()
    for number, raw in enumerate(text.splitlines(), start=1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        try:
            head, args = words[0], words[1:]
            if head == "switch" and len(args) == 3:
                g.switch(args[0], _KINDS[args[1].lower()], _SIDES[args[2].lower()])
            elif head == "port" and args:
                g.port(*args)
            elif head == "joint" and len(args) == 1:
                g.joint(args[0])
            elif head == "edge" and len(args) == 2:
                g.link(*args)
            else:
                raise CircuitError(f"cannot read {raw.strip()!r}")
        except (CircuitError, KeyError) as exc:
            raise CircuitError(f"line {number}: {exc}") from None
    return g


def elementary_circuit(bit: int = 0) -> CircuitGraph:
    """One-bit memory: read by entering at E, flip by entering at U.

    The memory switch M next to E holds the bit (left = 0 leads to O1,
    right = 1 to O2).  The flip-flop F next to U always selects the branch M
    does not, so a write crosses M passively through its non-selected branch
    and leaves through E.
    """
    m = Branch.RIGHT if bit else Branch.LEFT
    g = CircuitGraph()
    g.port("E", "U", "O1", "O2")
    g.switch("M", SwitchKind.MEMORY, m)
    g.switch("F", SwitchKind.FLIP_FLOP, m.other)
    g.switch("X1", SwitchKind.FIXED, Branch.LEFT)
    g.switch("X2", SwitchKind.FIXED, Branch.LEFT)
    g.link("E", "M.u")
    g.link("M.a", "X1.u").link("X1.a", "O1").link("X1.b", "F.a")
    g.link("M.b", "X2.u").link("X2.a", "O2").link("X2.b", "F.b")
    g.link("U", "F.u")
    return g


def register_unit(full: bool = False) -> CircuitGraph:
    """One unit of a unary register.

    Increment enters at ``i``: an empty unit becomes full and the locomotive
    leaves at ``r``; a full unit passes it on at ``i_next``.  Decrement enters
    at ``d``: a full unit becomes empty and the locomotive leaves at ``r``; an
    empty unit sends it out at ``j1``.  ``j2`` is the second failure track of
    the wiring and is left open here.

    The content is held twice, by the memory switches ``Mi`` (read on
    increment) and ``Md`` (read on decrement).  Writes reach them passively
    through their non-selected branch.  The flip-flops ``Ni`` and ``Nd``
    alternate between the set and clear continuations, which works because
    sets and clears of one unit strictly alternate.
    """
    s = Branch.RIGHT if full else Branch.LEFT
    g = CircuitGraph()
    g.port("i", "d", "r", "i_next", "j1", "j2")
    fixed, memory, flip = SwitchKind.FIXED, SwitchKind.MEMORY, SwitchKind.FLIP_FLOP
    g.switch("Fi", fixed, Branch.RIGHT).switch("Mi", memory, s)
    g.switch("Ai", fixed, Branch.LEFT).switch("Zi", fixed, Branch.LEFT)
    g.switch("Ni", flip, s)
    g.switch("Fd", fixed, Branch.RIGHT).switch("Md", memory, s)
    g.switch("Zd", fixed, Branch.LEFT).switch("Vd", fixed, Branch.LEFT)
    g.switch("Nd", flip, s)
    g.switch("R", fixed, Branch.LEFT)

    g.link("i", "Fi.a").link("Fi.u", "Mi.u").link("Fi.b", "Ni.u")
    g.link("Mi.a", "Ai.u").link("Ai.a", "Zi.b")
    g.link("Mi.b", "Zi.u").link("Zi.a", "i_next")
    g.link("Ni.a", "Vd.b").link("Ni.b", "R.b")

    g.link("d", "Fd.a").link("Fd.u", "Md.u").link("Fd.b", "Nd.u")
    g.link("Md.a", "Zd.u").link("Zd.a", "j1")
    g.link("Md.b", "Vd.u").link("Vd.a", "Zd.b")
    g.link("Nd.a", "R.a").link("Nd.b", "Ai.b")

    g.link("R.u", "r")
    return g


def bit_of(states: Mapping[str, SwitchState], memory: str = "M") -> int:
    return 1 if states[memory].selected is Branch.RIGHT else 0
