"""Decision procedures for timed and time-abstracted (bi)simulations.

Timed relations are decided on pairs of corner-point states, built lazily
from the two designated states; time-abstracted relations on pairs of zone
graph nodes.  Both use :class:`timedrel.solver.Arena`: the relation is the
set of positions from which the defender cannot be beaten.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .automaton import TAState, TimedAutomaton, common_scale
from .corner import CornerSpace
from .solver import Arena
from .zone_graph import ZoneGraph

SIDES = ("A", "B")


class RelationKind(str, Enum):
    TIMED_BISIM = "timed-bisim"
    TIMED_SIM = "timed-sim"
    TIMED_SIM_EQUIV = "timed-sim-equiv"
    PREBISIM = "prebisim"
    TA_BISIM = "ta-bisim"
    TA_DELAY_BISIM = "ta-delay-bisim"
    TA_OBS_BISIM = "ta-obs-bisim"
    TA_SIM_EQUIV = "ta-sim-equiv"
    TA_DELAY_SIM_EQUIV = "ta-delay-sim-equiv"
    TA_OBS_SIM_EQUIV = "ta-obs-sim-equiv"


FLAVORS = ("strong", "delay", "observational")


@dataclass
class Verdict:
    relation: str
    related: bool
    witness: frozenset | None = None
    refutation: list | None = None       # principal variation, list of trace entries
    arena: Arena | None = field(default=None, repr=False)
    detail: dict = field(default_factory=dict)

    @property
    def witness_size(self) -> int:
        return len(self.witness) if self.witness is not None else 0

    def to_dict(self) -> dict:
        d = {"relation": self.relation, "related": self.related}
        if self.related:
            d["witness_size"] = self.witness_size
        else:
            d["refutation_trace"] = self.refutation
        d.update(self.detail)
        return d


# ---------------------------------------------------------------------------
# preparation


class Pair:
    """Two automata with designated states and zone graphs at a common scale."""

    def __init__(self, A: TimedAutomaton, p: TAState | None, B: TimedAutomaton, q: TAState | None):
        self.A, self.B = A, B
        self.p = p if p is not None else A.initial_state()
        self.q = q if q is not None else B.initial_state()
        L = common_scale(self.p, self.q)
        self.GA = ZoneGraph(A, self.p, L)
        self.GB = ZoneGraph(B, self.q, L)
        self.space = CornerSpace([self.GA, self.GB])

    def swapped(self) -> "Pair":
        other = Pair.__new__(Pair)
        other.A, other.B, other.p, other.q = self.B, self.A, self.q, self.p
        other.GA, other.GB = self.GB, self.GA
        other.space = CornerSpace([other.GA, other.GB])
        return other

    def start(self):
        return self.space.start([self.p, self.q])

    def graph(self, k):
        return self.GA if k == 0 else self.GB


def _pair(A, p, B, q, pair):
    return pair if pair is not None else Pair(A, p, B, q)


# ---------------------------------------------------------------------------
# timed moves


def _delay_candidates(opts):
    """Challenger delays in increasing order, deduplicated: (kind, target, delay).

    ``target`` identifies the cp-delay independently of the δ-frame: the entered
    node id for 'enter', ``(clock, j)`` for 'f', ``None`` for 'max'.
    """
    cands = {}
    items = [("max", None, opts["max"])] + [("enter", m, d) for m, d in opts["enter"]] \
        + [("f", key, d) for key, d in opts["f"]]
    for kind, target, d in items:
        if d <= (0, 0):
            continue
        if d not in cands:
            cands[d] = (kind, target)
    return [cands[d] + (d,) for d in sorted(cands)]


def select_delay(opts, kind, target):
    """Look up a cp-delay by its frame-independent description."""
    if kind == "max":
        return opts["max"]
    pool = opts["enter"] if kind == "enter" else opts["f"]
    for key, d in pool:
        if key == target:
            return d
    raise KeyError((kind, target))


def timed_moves(space: CornerSpace, pos, sides=(0, 1), prebisim=False):
    """Challenger moves and defender responses on corner-state pairs.

    Moves are dicts with ``side``, ``kind`` ('action'/'delay') and either
    ``edge`` or ``delay`` (+ ``cp``, the cp-delay kind).  With ``prebisim`` the
    automaton with index 0 is the fast one.
    """
    locs, raw = pos
    out = []
    for k in sides:
        o = 1 - k
        for e in space.enabled(k, locs, raw):
            mid = space.fire(k, locs, raw, e)
            resps = [({"side": SIDES[o], "kind": "action", "edge": e2},
                      space.fire(o, mid[0], mid[1], e2))
                     for e2 in space.enabled(o, mid[0], mid[1]) if e2.action == e.action]
            out.append(({"side": SIDES[k], "kind": "action", "edge": e}, resps))
        opts = space.delay_options(k, locs, raw)
        for kind, target, d in _delay_candidates(opts):
            mv = {"side": SIDES[k], "kind": "delay", "delay": d, "cp": kind, "target": target}
            if not prebisim:
                resp = space.advance(locs, raw, [d, d])
                out.append((mv, [({"side": SIDES[o], "kind": "delay", "delay": d}, resp)]))
                continue
            answers = _prebisim_answers(space, locs, raw, k, kind, d)
            resps = []
            for d2 in answers:
                per = [d, d2] if k == 0 else [d2, d]
                resps.append(({"side": SIDES[o], "kind": "delay", "delay": d2},
                              space.advance(locs, raw, per)))
            out.append((mv, resps))
    return out


def _prebisim_answers(space, locs, raw, k, kind, d):
    """Defender delays for the asymmetric moves; index 0 is the fast side."""
    o = 1 - k
    opts = space.delay_options(o, locs, raw)
    ends = [x for _, x in opts["end"]]
    enters = [x for _, x in opts["enter"]]
    answers = {d}
    if k == 0:
        # the slow side may answer the fast side's entry delays with longer ones
        if kind != "max":
            answers.update(x for x in ends + enters if x >= d)
    else:
        pool = ends if kind == "max" else ends + enters
        answers.update(x for x in pool if (0, 0) <= x <= d)
    return sorted(answers)


# ---------------------------------------------------------------------------
# time-abstracted moves


def beta(G: ZoneGraph, m: int, a: str, flavor: str) -> set[int]:
    """Answers to an ``a``-move: ``a``, ``eps.a`` or ``eps.a.eps`` successors."""
    starts = [m] if flavor == "strong" else G.delay_chain(m)
    out = set()
    for s in starts:
        for act, t, _ in G.action_succ(s):
            if act == a:
                out.add(t)
    if flavor == "observational":
        out = {u for t in out for u in G.delay_chain(t)}
    return out


def ta_moves(graphs, pos, flavor, sides=(0, 1)):
    out = []
    for k in sides:
        o = 1 - k
        n, m = pos[k], pos[o]
        Gk, Go = graphs[k], graphs[o]
        seen = set()
        for a, t, _ in Gk.action_succ(n):
            if (a, t) in seen:
                continue
            seen.add((a, t))
            resps = []
            for t2 in sorted(beta(Go, m, a, flavor)):
                npos = (t, t2) if k == 0 else (t2, t)
                resps.append(({"side": SIDES[o], "kind": "action", "label": a, "node": t2}, npos))
            out.append(({"side": SIDES[k], "kind": "action", "label": a, "node": t}, resps))
        for t in Gk.delay_chain(n)[1:]:
            resps = []
            for t2 in Go.delay_chain(m):
                npos = (t, t2) if k == 0 else (t2, t)
                resps.append(({"side": SIDES[o], "kind": "eps", "node": t2}, npos))
            out.append(({"side": SIDES[k], "kind": "eps", "node": t}, resps))
    return out


# ---------------------------------------------------------------------------
# rendering of traces


def _render_timed(pair: Pair, pos, k):
    locs, raw = pos
    s = pair.space.to_corner_states(locs, raw)[k]
    return s.render(pair.graph(k).automaton.clocks)


def _entry_timed(pair, mv, before, after):
    k = SIDES.index(mv["side"])
    e = {"side": mv["side"], "kind": mv["kind"]}
    if mv["kind"] == "action":
        e["label"] = mv["edge"].action
    else:
        e["amount"] = pair.space.delay_value(mv["delay"]).render()
    e["from"] = _render_timed(pair, before, k)
    if after is not None:
        e["to"] = _render_timed(pair, after, k)
    return e


def _entry_ta(graphs, mv, before, after):
    k = SIDES.index(mv["side"])
    G = graphs[k]
    e = {"side": mv["side"], "kind": "action" if mv["kind"] == "action" else "delay"}
    if mv["kind"] == "action":
        e["label"] = mv["label"]
    else:
        e["amount"] = "eps"
    e["from"] = G.nodes[before[k]].render(G)
    e["to"] = G.nodes[mv["node"]].render(G)
    return e


def trace_of(arena: Arena, entry):
    """Flatten the principal variation into challenger/defender trace entries."""
    out = []
    for i, mv, resp, j in arena.principal_variation(0):
        before = arena.positions[i]
        after = arena.positions[j] if j is not None else None
        # the challenger's own successor is visible in the defender's result
        out.append(entry(mv, before, after))
        if resp is None:
            out.append({"side": SIDES[1 - SIDES.index(mv["side"])], "kind": "FAIL"})
        else:
            out.append(entry(resp, before, after))
    return out


def _verdict(kind, arena: Arena, entry, detail=None):
    if arena.challenger_wins(0):
        return Verdict(str(kind.value if isinstance(kind, Enum) else kind), False,
                       refutation=trace_of(arena, entry), arena=arena, detail=detail or {})
    wit = frozenset(arena.positions[i] for i in arena.defender_positions())
    return Verdict(str(kind.value if isinstance(kind, Enum) else kind), True, witness=wit,
                   arena=arena, detail=detail or {})


# ---------------------------------------------------------------------------
# timed relations


def _timed(kind, pair: Pair, sides=(0, 1), prebisim=False):
    space = pair.space
    arena = Arena(pair.start(), lambda pos: timed_moves(space, pos, sides, prebisim))
    # the challenger's successor is rendered from the response position
    return _verdict(kind, arena, lambda mv, b, a: _entry_timed(pair, mv, b, a))


def cp_bisim(A=None, p=None, B=None, q=None, *, pair: Pair | None = None) -> Verdict:
    """Timed bisimilarity of ``p`` and ``q`` via corner-point bisimulation."""
    return _timed(RelationKind.TIMED_BISIM, _pair(A, p, B, q, pair))


def cp_sim(A=None, p=None, B=None, q=None, *, pair: Pair | None = None) -> Verdict:
    """Does ``q`` timed-simulate ``p`` (challenger always plays on A)?"""
    return _timed(RelationKind.TIMED_SIM, _pair(A, p, B, q, pair), sides=(0,))


def cp_sim_equiv(A=None, p=None, B=None, q=None, *, pair: Pair | None = None) -> Verdict:
    pair = _pair(A, p, B, q, pair)
    fwd = _timed(RelationKind.TIMED_SIM_EQUIV, pair, sides=(0,))
    if not fwd.related:
        fwd.detail["direction"] = "B simulates A"
        return fwd
    bwd = _timed(RelationKind.TIMED_SIM_EQUIV, pair, sides=(1,))
    if not bwd.related:
        bwd.detail["direction"] = "A simulates B"
        return bwd
    return Verdict(RelationKind.TIMED_SIM_EQUIV.value, True, witness=fwd.witness | bwd.witness)


def cp_prebisim(A=None, p=None, B=None, q=None, *, pair: Pair | None = None) -> Verdict:
    """Is ``p`` at least as fast as ``q`` (timed performance prebisimulation)?"""
    return _timed(RelationKind.PREBISIM, _pair(A, p, B, q, pair), prebisim=True)


# ---------------------------------------------------------------------------
# time-abstracted relations


def _check_flavor(flavor):
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}; expected one of {', '.join(FLAVORS)}")


def _ta(kind, pair: Pair, flavor, sides=(0, 1)):
    graphs = (pair.GA, pair.GB)
    arena = Arena((pair.GA.initial, pair.GB.initial), lambda pos: ta_moves(graphs, pos, flavor, sides))
    return _verdict(kind, arena, lambda mv, b, a: _entry_ta(graphs, mv, b, a))


_TA_BISIM = {"strong": RelationKind.TA_BISIM, "delay": RelationKind.TA_DELAY_BISIM,
             "observational": RelationKind.TA_OBS_BISIM}
_TA_SIM = {"strong": RelationKind.TA_SIM_EQUIV, "delay": RelationKind.TA_DELAY_SIM_EQUIV,
           "observational": RelationKind.TA_OBS_SIM_EQUIV}


def ta_bisim(A=None, p=None, B=None, q=None, flavor="strong", *, pair: Pair | None = None) -> Verdict:
    _check_flavor(flavor)
    return _ta(_TA_BISIM[flavor], _pair(A, p, B, q, pair), flavor)


def ta_sim(A=None, p=None, B=None, q=None, flavor="strong", *, pair: Pair | None = None) -> Verdict:
    """One direction: does ``q`` time-abstractly simulate ``p``?"""
    _check_flavor(flavor)
    return _ta(_TA_SIM[flavor], _pair(A, p, B, q, pair), flavor, sides=(0,))


def ta_sim_equiv(A=None, p=None, B=None, q=None, flavor="strong", *, pair: Pair | None = None) -> Verdict:
    _check_flavor(flavor)
    pair = _pair(A, p, B, q, pair)
    kind = _TA_SIM[flavor]
    fwd = _ta(kind, pair, flavor, sides=(0,))
    if not fwd.related:
        return fwd
    bwd = _ta(kind, pair, flavor, sides=(1,))
    if not bwd.related:
        return bwd
    return Verdict(kind.value, True, witness=fwd.witness | bwd.witness)


# ---------------------------------------------------------------------------
# dispatch and hierarchy


def decide(kind, A=None, p=None, B=None, q=None, *, pair: Pair | None = None,
           fast_side: str = "left") -> Verdict:
    kind = RelationKind(kind)
    pair = _pair(A, p, B, q, pair)
    if kind is RelationKind.TIMED_BISIM:
        return cp_bisim(pair=pair)
    if kind is RelationKind.TIMED_SIM:
        return cp_sim(pair=pair)
    if kind is RelationKind.TIMED_SIM_EQUIV:
        return cp_sim_equiv(pair=pair)
    if kind is RelationKind.PREBISIM:
        if fast_side == "right":
            v = cp_prebisim(pair=pair.swapped())
            if v.refutation:
                # report sides relative to the caller's (A, B), not the swapped pair
                flip = {"A": "B", "B": "A"}
                v.refutation = [{**e, "side": flip[e["side"]]} for e in v.refutation]
            return v
        if fast_side != "left":
            raise ValueError(f"fast_side must be 'left' or 'right', got {fast_side!r}")
        return cp_prebisim(pair=pair)
    for flavor, k in _TA_BISIM.items():
        if kind is k:
            return ta_bisim(pair=pair, flavor=flavor)
    for flavor, k in _TA_SIM.items():
        if kind is k:
            return ta_sim_equiv(pair=pair, flavor=flavor)
    raise ValueError(kind)


HIERARCHY_ORDER = [
    RelationKind.TIMED_BISIM, RelationKind.PREBISIM, RelationKind.TA_BISIM,
    RelationKind.TA_DELAY_BISIM, RelationKind.TA_OBS_BISIM,
    RelationKind.TIMED_SIM_EQUIV, RelationKind.TA_SIM_EQUIV,
    RelationKind.TA_DELAY_SIM_EQUIV, RelationKind.TA_OBS_SIM_EQUIV,
]

# (stronger, weaker): a positive verdict for the first forces one for the second
HIERARCHY_ARROWS = [
    (RelationKind.TIMED_BISIM, RelationKind.PREBISIM),
    (RelationKind.PREBISIM, RelationKind.TA_BISIM),
    (RelationKind.TA_BISIM, RelationKind.TA_DELAY_BISIM),
    (RelationKind.TA_DELAY_BISIM, RelationKind.TA_OBS_BISIM),
    (RelationKind.TIMED_BISIM, RelationKind.TIMED_SIM_EQUIV),
    (RelationKind.TIMED_SIM_EQUIV, RelationKind.TA_SIM_EQUIV),
    (RelationKind.TA_BISIM, RelationKind.TA_SIM_EQUIV),
    (RelationKind.TA_DELAY_BISIM, RelationKind.TA_DELAY_SIM_EQUIV),
    (RelationKind.TA_OBS_BISIM, RelationKind.TA_OBS_SIM_EQUIV),
    (RelationKind.TA_SIM_EQUIV, RelationKind.TA_DELAY_SIM_EQUIV),
    (RelationKind.TA_DELAY_SIM_EQUIV, RelationKind.TA_OBS_SIM_EQUIV),
]


@dataclass
class HierarchyReport:
    verdicts: dict
    violations: list

    @property
    def monotone(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"verdicts": {k.value: v.related for k, v in self.verdicts.items()},
                "violations": [f"{a.value} => {b.value}" for a, b in self.violations],
                "monotone": self.monotone}


def check_hierarchy(A=None, p=None, B=None, q=None, *, pair: Pair | None = None) -> HierarchyReport:
    """Run every relation (prebisim with A as the fast side) and check the containments."""
    pair = _pair(A, p, B, q, pair)
    verdicts = {k: decide(k, pair=pair) for k in HIERARCHY_ORDER}
    violations = [(a, b) for a, b in HIERARCHY_ARROWS
                  if verdicts[a].related and not verdicts[b].related]
    return HierarchyReport(verdicts, violations)
