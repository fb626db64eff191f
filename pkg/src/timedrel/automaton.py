"""Timed automata, their timed labelled transition system, and max constants.

Automata are read from a JSON document::

    {"clocks": ["x"], "actions": ["a"], "locations": ["l0", "l1"],
     "initial": "l0",
     "edges": [{"from": "l0", "to": "l1", "action": "a",
                "guard": [{"clock": "x", "op": "=", "const": 2}],
                "resets": []}]}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

OPS = ("<", "<=", "=", ">=", ">")


class AutomatonError(ValueError):
    """Invalid automaton document or state designator."""


@dataclass(frozen=True)
class ClockConstraint:
    clock: str
    op: str
    const: int

    def holds(self, value) -> bool:
        c = self.const
        return {"<": value < c, "<=": value <= c, "=": value == c,
                ">=": value >= c, ">": value > c}[self.op]

    def __str__(self):
        return f"{self.clock}{self.op}{self.const}"


@dataclass(frozen=True)
class Edge:
    source: str
    action: str
    target: str
    guard: tuple[ClockConstraint, ...] = ()
    resets: frozenset[str] = frozenset()

    def __str__(self):
        g = " & ".join(map(str, self.guard)) or "true"
        r = ",".join(sorted(self.resets))
        return f"{self.source} -[{g}, {self.action}, {{{r}}}]-> {self.target}"


@dataclass(frozen=True)
class TAState:
    """A TLTS state: location plus a rational value per clock (automaton order)."""
    location: str
    values: tuple = ()

    def value(self, A: "TimedAutomaton", clock: str):
        return self.values[A.clock_index[clock]]

    def render(self, clocks: Iterable[str]) -> str:
        vals = ",".join(f"{c}={_num(v)}" for c, v in zip(clocks, self.values))
        return f"({self.location}, {vals})" if vals else f"({self.location})"


def _num(v) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else str(v)


@dataclass
class TimedAutomaton:
    clocks: tuple[str, ...]
    actions: tuple[str, ...]
    locations: tuple[str, ...]
    initial: str
    edges: tuple[Edge, ...]
    name: str = ""
    clock_index: dict = field(init=False, repr=False)
    _out: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.clocks = tuple(self.clocks)
        self.actions = tuple(self.actions)
        self.locations = tuple(self.locations)
        self.edges = tuple(self.edges)
        self.clock_index = {c: i for i, c in enumerate(self.clocks)}
        self._validate()
        self._out = {l: [] for l in self.locations}
        for e in self.edges:
            self._out[e.source].append(e)

    def _validate(self):
        for what, items in (("clock", self.clocks), ("location", self.locations),
                            ("action", self.actions)):
            if len(set(items)) != len(items):
                raise AutomatonError(f"duplicate {what} name")
        if self.initial not in self.locations:
            raise AutomatonError(f"initial location {self.initial!r} is not declared")
        for k, e in enumerate(self.edges):
            for end in (e.source, e.target):
                if end not in self.locations:
                    raise AutomatonError(f"edge {k}: undeclared location {end!r}")
            if e.action not in self.actions:
                raise AutomatonError(f"edge {k}: undeclared action {e.action!r}")
            for g in e.guard:
                if g.clock not in self.clock_index:
                    raise AutomatonError(f"edge {k}: undeclared clock {g.clock!r} in guard")
                if g.op not in OPS:
                    raise AutomatonError(f"edge {k}: unknown comparison {g.op!r}")
                if isinstance(g.const, bool) or not isinstance(g.const, int) or g.const < 0:
                    raise AutomatonError(
                        f"edge {k}: guard constant must be a natural number, got {g.const!r}")
            for r in e.resets:
                if r not in self.clock_index:
                    raise AutomatonError(f"edge {k}: undeclared clock {r!r} in resets")

    def outgoing(self, location: str) -> list[Edge]:
        return self._out[location]

    def initial_state(self) -> TAState:
        return TAState(self.initial, tuple(0 for _ in self.clocks))

    def state(self, location: str, valuation: Mapping[str, object] | None = None) -> TAState:
        if location not in self._out:
            raise AutomatonError(f"unknown location {location!r}")
        vals = [Fraction(0)] * len(self.clocks)
        for c, v in (valuation or {}).items():
            if c not in self.clock_index:
                raise AutomatonError(f"unknown clock {c!r}")
            v = Fraction(v)
            if v < 0:
                raise AutomatonError(f"clock {c} has negative value {v}")
            vals[self.clock_index[c]] = v
        return TAState(location, tuple(_tidy(v) for v in vals))

    def parse_state(self, text: str | None) -> TAState:
        """Parse a designator ``LOC[:clock=value,...]``; ``None`` gives the initial state."""
        if text is None:
            return self.initial_state()
        loc, _, rest = text.partition(":")
        loc = loc.strip()
        val = {}
        for part in filter(None, (p.strip() for p in rest.split(","))):
            if "=" not in part:
                raise AutomatonError(f"bad clock assignment {part!r} in {text!r}")
            c, v = (s.strip() for s in part.split("=", 1))
            try:
                val[c] = Fraction(v)
            except (ValueError, ZeroDivisionError):
                raise AutomatonError(f"bad clock value {v!r} in {text!r}") from None
        return self.state(loc, val)

    def guard_holds(self, e: Edge, values) -> bool:
        return all(g.holds(values[self.clock_index[g.clock]]) for g in e.guard)


def _tidy(v: Fraction):
    return v.numerator if v.denominator == 1 else v


# ---------------------------------------------------------------------------
# document I/O

def parse_automaton(text: str, name: str = "") -> TimedAutomaton:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AutomatonError(f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return automaton_from_dict(doc, name=name)


def automaton_from_dict(doc, name: str = "") -> TimedAutomaton:
    if not isinstance(doc, dict):
        raise AutomatonError("automaton document must be an object")
    for key in ("clocks", "locations", "initial"):
        if key not in doc:
            raise AutomatonError(f"missing key {key!r}")
    edges = []
    actions = list(doc.get("actions", []))
    for k, e in enumerate(doc.get("edges", [])):
        try:
            guard = tuple(ClockConstraint(g["clock"], g["op"], g["const"]) for g in e.get("guard", []))
            edges.append(Edge(e["from"], e["action"], e["to"], guard, frozenset(e.get("resets", []))))
        except (KeyError, TypeError) as exc:
            raise AutomatonError(f"edge {k}: malformed ({exc})") from None
    return TimedAutomaton(doc["clocks"], actions, doc["locations"], doc["initial"],
                          edges, name=doc.get("name", name))


def automaton_to_dict(A: TimedAutomaton) -> dict:
    d = {"clocks": list(A.clocks), "actions": list(A.actions),
         "locations": list(A.locations), "initial": A.initial,
         "edges": [{"from": e.source, "to": e.target, "action": e.action,
                    "guard": [{"clock": g.clock, "op": g.op, "const": g.const} for g in e.guard],
                    "resets": sorted(e.resets)} for e in A.edges]}
    if A.name:
        d["name"] = A.name
    return d


def render_automaton(A: TimedAutomaton) -> str:
    return json.dumps(automaton_to_dict(A), indent=2)


def load_automaton(path) -> TimedAutomaton:
    with open(path) as fh:
        text = fh.read()
    try:
        return parse_automaton(text, name=str(path))
    except AutomatonError as exc:
        raise AutomatonError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# semantics

def tlts_step(A: TimedAutomaton, s: TAState, label) -> set[TAState]:
    """Successors of ``s`` under an action name or a non-negative delay."""
    if isinstance(label, str):
        out = set()
        for e in A.outgoing(s.location):
            if e.action == label and A.guard_holds(e, s.values):
                vals = tuple(0 if c in e.resets else v for c, v in zip(A.clocks, s.values))
                out.add(TAState(e.target, vals))
        return out
    d = Fraction(label)
    if d < 0:
        raise ValueError("delay must be non-negative")
    return {TAState(s.location, tuple(_tidy(Fraction(v) + d) for v in s.values))}


class MaxConstantTable:
    """``max_x^l`` for every location ``l`` and clock ``x``."""

    def __init__(self, A: TimedAutomaton, entries: dict):
        self.automaton = A
        self.entries = entries
        self._vec = {l: tuple(entries[(l, c)] for c in A.clocks) for l in A.locations}

    def get(self, location: str, clock: str) -> int:
        return self.entries[(location, clock)]

    def vector(self, location: str) -> tuple[int, ...]:
        return self._vec[location]

    def global_max(self) -> int:
        return max(self.entries.values(), default=0)

    def __eq__(self, other):
        return isinstance(other, MaxConstantTable) and self.entries == other.entries


def max_constants(A: TimedAutomaton) -> MaxConstantTable:
    m = {(l, c): 0 for l in A.locations for c in A.clocks}
    for e in A.edges:
        for g in e.guard:
            key = (e.source, g.clock)
            m[key] = max(m[key], g.const)
    changed = True
    while changed:
        changed = False
        for e in A.edges:
            for c in A.clocks:
                if c in e.resets:
                    continue
                if m[(e.target, c)] > m[(e.source, c)]:
                    m[(e.source, c)] = m[(e.target, c)]
                    changed = True
    return MaxConstantTable(A, m)


def common_scale(*states: TAState) -> int:
    """Least common multiple of the denominators of the given valuations."""
    L = 1
    for s in states:
        for v in s.values:
            L = math.lcm(L, Fraction(v).denominator)
    return L
