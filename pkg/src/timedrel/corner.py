"""Corner-point states: clock values of the form ``q``, ``q+kδ`` with δ infinitesimal.

Internally a *corner vector* is a tuple of ``(base, coef)`` pairs with
integer bases scaled by the zone graph's scale factor.  Several automata (and
formula clocks) can share one vector so that delays advance them in lockstep.

Normalisation keeps the vector finite:

* a clock above its location's max constant is clamped to ``(M, +1)``;
* the δ-coefficients of the remaining clocks are rank-compressed jointly
  (order and sign preserved), so a single clock ends up with a plain sign.

Delays are computed in a *doubled* frame (all coefficients times two) so a
``±1`` step means "an infinitesimal amount, smaller than any gap between
two clocks' offsets".  Compression afterwards brings coefficients back to
consecutive ranks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .automaton import Edge, MaxConstantTable, TAState, TimedAutomaton
from .zone import INF, bound_strict, bound_value
from .zone_graph import ZoneGraph

# ---------------------------------------------------------------------------
# public value types


@dataclass(frozen=True)
class DeltaValue:
    base: object = 0      # int or Fraction, real units
    delta: int = 0

    def key(self):
        return (self.base, self.delta)

    def __lt__(self, other):
        return self.key() < other.key()

    def __le__(self, other):
        return self.key() <= other.key()

    def __gt__(self, other):
        return self.key() > other.key()

    def __ge__(self, other):
        return self.key() >= other.key()

    def __add__(self, other):
        return DeltaValue(_tidy(self.base + other.base), self.delta + other.delta)

    def compare_int(self, c) -> int:
        """-1, 0 or 1 as this value is below, equal to or above the number ``c``."""
        if self.base != c:
            return -1 if self.base < c else 1
        return (self.delta > 0) - (self.delta < 0)

    def render(self) -> str:
        b = Fraction(self.base)
        s = str(b.numerator) if b.denominator == 1 else str(b)
        if self.delta > 0:
            s += "+d"
        elif self.delta < 0:
            s += "-d"
        return s

    __str__ = render


def _tidy(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


@dataclass(frozen=True)
class CornerState:
    location: str
    values: tuple  # tuple[DeltaValue, ...] in automaton clock order

    def render(self, clocks: Sequence[str]) -> str:
        vals = ",".join(f"{c}={v.render()}" for c, v in zip(clocks, self.values))
        return f"({self.location}, {vals})" if vals else f"({self.location})"

    @classmethod
    def from_state(cls, s: TAState) -> "CornerState":
        return cls(s.location, tuple(DeltaValue(_tidy(Fraction(v)), 0) for v in s.values))


@dataclass(frozen=True)
class CpDelay:
    amount: DeltaValue
    kind: str = "delay"   # 'max', 'enter', 'end', 'f'

    def render(self) -> str:
        return self.amount.render()


# ---------------------------------------------------------------------------
# raw vector arithmetic


def compress(raw, clamps):
    """Clamp above-max entries and rank-compress the δ-coefficients of the rest."""
    ks = set()
    clamped = []
    for (b, k), c in zip(raw, clamps):
        hit = c is not None and (b > c or (b == c and k > 0))
        clamped.append(hit)
        if not hit:
            ks.add(k)
    rank = {0: 0}
    for r, k in enumerate(sorted((k for k in ks if k > 0)), 1):
        rank[k] = r
    for r, k in enumerate(sorted((k for k in ks if k < 0), reverse=True), 1):
        rank[k] = -r
    return tuple((c, 1) if hit else (b, rank[k])
                 for (b, k), c, hit in zip(raw, clamps, clamped))


def doubled(raw):
    return tuple((b, 2 * k) for b, k in raw)


def dkey_le(d1, d2) -> bool:
    return d1 <= d2


def satisfies(raw, i: int, op: str, c) -> bool:
    """Evaluate ``x_i op c`` on a corner vector (``i`` is 0-based)."""
    b, k = raw[i]
    if b != c:
        cmp = -1 if b < c else 1
    else:
        cmp = (k > 0) - (k < 0)
    if op == "<":
        return cmp < 0
    if op == "<=":
        return cmp <= 0
    if op == "=":
        return cmp == 0
    if op == ">=":
        return cmp >= 0
    return cmp > 0


def _exit_delay(z, raw2, sat):
    """Last delay keeping ``raw2`` (doubled frame) inside zone ``z``."""
    n = z.n
    best = None
    for i in range(1, n):
        ub = z.m[i * n]
        if ub == INF:
            continue
        b, k = raw2[i - 1]
        d = (bound_value(ub) - b, -k - (1 if bound_strict(ub) else 0))
        if best is None or d < best:
            best = d
    return sat if best is None else best


def _entry_delay(z, raw2):
    """First delay bringing ``raw2`` (doubled frame) into zone ``z``."""
    best = (0, 0)
    for i in range(1, z.n):
        lb = z.m[i]
        b, k = raw2[i - 1]
        d = (-bound_value(lb) - b, -k + (1 if bound_strict(lb) else 0))
        if d > best:
            best = d
    return best


# ---------------------------------------------------------------------------
# spaces of joint corner vectors


class CornerSpace:
    """Joint corner vectors over several automata plus optional extra clocks.

    A *position* is ``(locs, raw)``: one location per automaton and one
    ``(base, coef)`` entry per clock (automaton clocks in order, then extra
    clocks).  Extra clocks (formula clocks) clamp at ``extra_max`` (real units).
    """

    def __init__(self, graphs: Sequence[ZoneGraph], n_extra: int = 0, extra_max: int = 0):
        self.graphs = list(graphs)
        scales = {G.scale for G in self.graphs}
        if len(scales) > 1:
            raise ValueError("zone graphs must share one scale")
        self.L = scales.pop() if scales else 1
        self.offsets = []
        off = 0
        for G in self.graphs:
            self.offsets.append(off)
            off += G.nclocks
        self.n_auto = off
        self.n_extra = n_extra
        self.extra_clamp = extra_max * self.L
        self._clamp_cache = {}
        self._node_cache = {}

    # -- basics
    def clamps(self, locs):
        c = self._clamp_cache.get(locs)
        if c is None:
            c = []
            for G, l in zip(self.graphs, locs):
                c.extend(G.max_vector(l)[1:])
            c.extend([self.extra_clamp] * self.n_extra)
            c = tuple(c)
            self._clamp_cache[locs] = c
        return c

    def normalize(self, locs, raw):
        return compress(raw, self.clamps(locs))

    def start(self, states: Sequence[TAState], extra=()):
        locs = tuple(s.location for s in states)
        raw = []
        for s in states:
            for v in s.values:
                q = Fraction(v) * self.L
                if q.denominator != 1:
                    raise ValueError("state valuation not representable at this scale")
                raw.append((int(q), 0))
        raw.extend(extra)
        return locs, self.normalize(locs, tuple(raw))

    def side(self, k: int, raw):
        o = self.offsets[k]
        return raw[o:o + self.graphs[k].nclocks]

    def node(self, k: int, locs, raw) -> int:
        """Node id of automaton ``k`` for the position."""
        G = self.graphs[k]
        part = self.side(k, raw)
        key = (k, locs[k], part)
        nid = self._node_cache.get(key)
        if nid is None:
            clamps = G.max_vector(locs[k])[1:]
            nid = G.locate(locs[k], compress(part, clamps))
            self._node_cache[key] = nid
        return nid

    # -- actions
    def enabled(self, k: int, locs, raw):
        """Enabled edges of automaton ``k``."""
        G = self.graphs[k]
        A = G.automaton
        part = self.side(k, raw)
        L = self.L
        out = []
        for e in A.outgoing(locs[k]):
            if all(satisfies(part, A.clock_index[g.clock], g.op, g.const * L) for g in e.guard):
                out.append(e)
        return out

    def fire(self, k: int, locs, raw, e: Edge, extra_reset=()):
        """Take edge ``e`` in automaton ``k``; ``extra_reset`` zeroes extra clocks."""
        G = self.graphs[k]
        A = G.automaton
        o = self.offsets[k]
        r = list(raw)
        for c in e.resets:
            r[o + A.clock_index[c]] = (0, 0)
        for j in extra_reset:
            r[self.n_auto + j] = (0, 0)
        nl = locs[:k] + (e.target,) + locs[k + 1:]
        return nl, self.normalize(nl, tuple(r))

    def reset_extra(self, locs, raw, j):
        r = list(raw)
        r[self.n_auto + j] = (0, 0)
        return locs, self.normalize(locs, tuple(r))

    # -- delays (doubled frame)
    def saturation(self, k: int, locs, raw2):
        G = self.graphs[k]
        mv = G.max_vector(locs[k])
        part = self.side(k, raw2)
        d = (0, 0)
        for i, (b, _) in enumerate(part):
            cand = (mv[i + 1] + self.L - b, 0)
            if cand > d:
                d = cand
        return d

    def delay_options(self, k: int, locs, raw):
        """Corner-point delays of automaton ``k`` (doubled frame).

        Returns a dict with ``max`` (max delay inside the current node),
        ``enter`` (list of (node, delay) for each later delay successor),
        ``end`` (list of (node, delay): last delay inside each chain node) and
        ``f`` (list of ((clock, j), delay) fractional-part delays).
        """
        G = self.graphs[k]
        raw2 = doubled(self.side(k, raw))
        nid = self.node(k, locs, raw)
        chain = G.delay_chain(nid)
        sat = self.saturation(k, locs, raw2)
        ends = [(m, _exit_delay(G.nodes[m].zone, raw2, sat)) for m in chain]
        enters = [(m, _entry_delay(G.nodes[m].zone, raw2)) for m in chain[1:]]
        fs = []
        L = self.L
        mv = G.max_vector(locs[k])
        for i, (b, k2) in enumerate(raw2):
            if b % L and not (b == mv[i + 1] and k2 > 0):
                f = L - b % L
                for j in (-1, 0, 1):
                    fs.append(((i, j), (f, -k2 + j)))
        return {"max": ends[0][1], "enter": enters, "end": ends, "f": fs}

    def advance(self, locs, raw, per_side, extra=None):
        """Apply delays (doubled frame) per automaton; ``None`` leaves a side idle.

        Extra clocks advance by ``extra`` (defaults to the first non-idle delay).
        """
        r = []
        for k, G in enumerate(self.graphs):
            d = per_side[k]
            part = self.side(k, raw)
            if d is None:
                r.extend((b, 2 * c) for b, c in part)
            else:
                db, dk = d
                r.extend((b + db, 2 * c + dk) for b, c in part)
        if self.n_extra:
            if extra is None:
                extra = next((d for d in per_side if d is not None), (0, 0))
            db, dk = extra
            r.extend((b + db, 2 * c + dk) for b, c in raw[self.n_auto:])
        return locs, self.normalize(locs, tuple(r))

    # -- conversion
    def to_corner_states(self, locs, raw):
        out = []
        for k, G in enumerate(self.graphs):
            part = self.side(k, raw)
            out.append(CornerState(locs[k], tuple(self.value(v) for v in part)))
        return out

    def value(self, v) -> DeltaValue:
        b, k = v
        return DeltaValue(_tidy(Fraction(b, self.L)), (k > 0) - (k < 0))

    def delay_value(self, d) -> DeltaValue:
        return self.value(d)


# ---------------------------------------------------------------------------
# single-state API


def _scaled(s: CornerState, L: int):
    raw = []
    for v in s.values:
        q = Fraction(v.base) * L
        raw.append((q if q.denominator != 1 else int(q), v.delta))
    return tuple(raw)


def _state_clamps(M: MaxConstantTable, location, L=1):
    return tuple(c * L for c in M.vector(location))


def normalize(s: CornerState, M: MaxConstantTable) -> CornerState:
    raw = tuple((v.base, v.delta) for v in s.values)
    out = compress(raw, _state_clamps(M, s.location))
    return CornerState(s.location, tuple(DeltaValue(_tidy(b), k) for b, k in out))


def apply_delay(s: CornerState, d, M: MaxConstantTable) -> CornerState:
    """Literal δ-arithmetic: add ``d`` to every clock, then normalise."""
    amount = d.amount if isinstance(d, CpDelay) else d
    vals = tuple(v + amount for v in s.values)
    return normalize(CornerState(s.location, vals), M)


def guard_holds(A: TimedAutomaton, s: CornerState, e: Edge) -> bool:
    return all(s.values[A.clock_index[g.clock]].compare_int(g.const) in _OK[g.op] for g in e.guard)


_OK = {"<": (-1,), "<=": (-1, 0), "=": (0,), ">=": (0, 1), ">": (1,)}


def apply_edge(A: TimedAutomaton, s: CornerState, e: Edge, M: MaxConstantTable):
    """Successor under ``e`` or ``None`` if the guard does not hold."""
    if e.source != s.location or not guard_holds(A, s, e):
        return None
    vals = tuple(DeltaValue(0, 0) if c in e.resets else v for c, v in zip(A.clocks, s.values))
    return normalize(CornerState(e.target, vals), M)


def cp_delays(s: CornerState, G: ZoneGraph, M: MaxConstantTable | None = None):
    """Corner-point delays of ``s`` with their successor states.

    Returns a list of ``(CpDelay, CornerState)`` in increasing delay order:
    the maximal delay inside the current node, the entry delay of every later
    delay-successor node, and the ``f, f±δ`` delays for clocks with a
    fractional value.
    """
    space = CornerSpace([G])
    L = G.scale
    raw = _scaled(s, L)
    if any(isinstance(b, Fraction) for b, _ in raw):
        raise ValueError("state is not representable at the graph's scale")
    locs = (s.location,)
    raw = space.normalize(locs, raw)
    opts = space.delay_options(0, locs, raw)
    cands = [("max", opts["max"])] + [("enter", d) for _, d in opts["enter"]] \
        + [("f", d) for _, d in opts["f"]]
    seen = {}
    for kind, d in cands:
        if d < (0, 0) or d in seen:
            continue
        seen[d] = kind
    out = []
    for d in sorted(seen):
        nl, nraw = space.advance(locs, raw, [d])
        succ = space.to_corner_states(nl, nraw)[0]
        out.append((CpDelay(space.value(d), seen[d]), succ))
    return out
