"""Brute-force baselines used to cross-check the zone-based procedures.

* :func:`region_graph` / :func:`region_bisim`: the classical region
  construction with global per-clock max constants, and (saturated) strong
  bisimulation by signature refinement.
* :func:`grid_timed_bisim`: a bounded bisimulation game whose delays range
  over multiples of a fixed step.  A ``False`` answer is a genuine
  refutation of timed bisimilarity; ``True`` is only evidence.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .automaton import TAState, TimedAutomaton

# ---------------------------------------------------------------------------
# regions


def global_max(A: TimedAutomaton) -> tuple[int, ...]:
    m = {c: 0 for c in A.clocks}
    for e in A.edges:
        for g in e.guard:
            m[g.clock] = max(m[g.clock], g.const)
    return tuple(m[c] for c in A.clocks)


def _canon(ints, fracs):
    """Renumber positive fractional classes to 1..k."""
    pos = sorted({f for f in fracs if f})
    rank = {f: r for r, f in enumerate(pos, 1)}
    return tuple(ints), tuple(None if f is None else (rank[f] if f else 0) for f in fracs)


def region_of(A: TimedAutomaton, s: TAState, M=None):
    M = M or global_max(A)
    ints, fracs = [], []
    for v, m in zip(s.values, M):
        v = Fraction(v)
        if v > m:
            ints.append(None)
            fracs.append(None)
        else:
            i = math.floor(v)
            ints.append(i)
            fracs.append(v - i)
    ints, fr = _canon(ints, fracs)
    return (s.location, ints, fr)


def _time_succ(region, M):
    loc, ints, fracs = region
    bounded = [i for i, f in enumerate(fracs) if f is not None]
    if not bounded:
        return None
    ints = list(ints)
    fracs = list(fracs)
    if any(fracs[i] == 0 for i in bounded):
        for i in bounded:
            if fracs[i] == 0:
                fracs[i] = 1
            else:
                fracs[i] += 1
        for i in bounded:
            if ints[i] == M[i] and fracs[i]:
                ints[i] = None
                fracs[i] = None
    else:
        top = max(fracs[i] for i in bounded)
        for i in bounded:
            if fracs[i] == top:
                ints[i] += 1
                fracs[i] = 0
    ints, fr = _canon(ints, fracs)
    return (loc, ints, fr)


def _compare(ints, fracs, i, c) -> tuple[int, ...]:
    """Possible signs of (x_i - c) over the region (uniform, so one sign)."""
    if ints[i] is None:
        return 1
    if fracs[i] == 0:
        return (ints[i] > c) - (ints[i] < c)
    return 1 if ints[i] >= c else -1


_OK = {"<": (-1,), "<=": (-1, 0), "=": (0,), ">=": (0, 1), ">": (1,)}


def _action_succ(A: TimedAutomaton, region):
    loc, ints, fracs = region
    out = []
    for e in A.outgoing(loc):
        if all(_compare(ints, fracs, A.clock_index[g.clock], g.const) in _OK[g.op] for g in e.guard):
            ni, nf = list(ints), list(fracs)
            for c in e.resets:
                k = A.clock_index[c]
                ni[k], nf[k] = 0, 0
            i2, f2 = _canon(ni, nf)
            out.append((e.action, (e.target, i2, f2)))
    return out


class RegionGraph:
    """Reachable regions with action edges and immediate time successors."""

    def __init__(self, A: TimedAutomaton, start: TAState | None = None, M=None):
        self.automaton = A
        self.M = tuple(M) if M is not None else global_max(A)
        start = start if start is not None else A.initial_state()
        self.initial = region_of(A, start, self.M)
        self.succ = {}
        todo = [self.initial]
        while todo:
            r = todo.pop()
            if r in self.succ:
                continue
            edges = _action_succ(A, r)
            t = _time_succ(r, self.M)
            if t is not None and t != r:
                edges.append(("eps", t))
            self.succ[r] = edges
            todo.extend(x for _, x in edges if x not in self.succ)

    @property
    def regions(self):
        return list(self.succ)


def region_graph(A: TimedAutomaton, M=None, start: TAState | None = None) -> RegionGraph:
    return RegionGraph(A, start, M)


def all_regions(A: TimedAutomaton, M=None) -> list:
    """Every region of every location (not only reachable ones)."""
    M = tuple(M) if M is not None else global_max(A)
    n = len(A.clocks)
    out = set()
    for ints in itertools.product(*[list(range(m + 1)) + [None] for m in M]):
        bounded = [i for i in range(n) if ints[i] is not None]
        for classes in itertools.product(range(len(bounded) + 1), repeat=len(bounded)):
            pos = sorted({c for c in classes if c})
            if pos != list(range(1, len(pos) + 1)):
                continue
            fr = [None] * n
            ok = True
            for i, c in zip(bounded, classes):
                if ints[i] == M[i] and c:
                    ok = False
                fr[i] = c
            if ok:
                for l in A.locations:
                    out.add((l, tuple(ints), tuple(fr)))
    return sorted(out, key=repr)


def region_count_bound(M) -> int:
    """Classical upper bound n! * 2^n * prod(2 M_i + 2) per location."""
    n = len(M)
    return math.factorial(n) * 2 ** n * math.prod(2 * m + 2 for m in M)


def _saturate(succ, flavor):
    """Per state: eps* closure and beta-closed action successors."""
    eps = {}

    def closure(r):
        if r in eps:
            return eps[r]
        seen = [r]
        cur = r
        while True:
            nxt = [t for a, t in succ[cur] if a == "eps"]
            if not nxt:
                break
            cur = nxt[0]
            seen.append(cur)
        eps[r] = frozenset(seen)
        return eps[r]

    trans = {}
    for r in succ:
        starts = [r] if flavor == "strong" else closure(r)
        acts = {}
        for s in starts:
            for a, t in succ[s]:
                if a == "eps":
                    continue
                targets = closure(t) if flavor == "observational" else (t,)
                acts.setdefault(a, set()).update(targets)
        trans[r] = {a: frozenset(ts) for a, ts in acts.items()}
        trans[r]["eps"] = closure(r)
    return trans


def region_bisim(A: TimedAutomaton, p: TAState | None, B: TimedAutomaton, q: TAState | None,
                 flavor: str = "strong") -> bool:
    """Time-abstracted bisimilarity via the region graphs of both automata."""
    GA = RegionGraph(A, p)
    GB = RegionGraph(B, q)
    succ = {("A",) + r: [(a, ("A",) + t) for a, t in es] for r, es in GA.succ.items()}
    succ.update({("B",) + r: [(a, ("B",) + t) for a, t in es] for r, es in GB.succ.items()})
    trans = _saturate(succ, flavor)
    block = {r: 0 for r in succ}
    nblocks = 1
    while True:
        sigs = {}
        new = {}
        for r in succ:
            sig = (block[r], frozenset((a, block[t]) for a, ts in trans[r].items() for t in ts))
            new[r] = sigs.setdefault(sig, len(sigs))
        block = new
        if len(sigs) == nblocks:
            break
        nblocks = len(sigs)
    return block[("A",) + GA.initial] == block[("B",) + GB.initial]


# ---------------------------------------------------------------------------
# grid game


def grid_timed_bisim(A: TimedAutomaton, p: TAState | None, B: TimedAutomaton, q: TAState | None,
                     step=Fraction(1, 2), depth: int = 12) -> bool:
    """Bounded timed-bisimulation game with delays restricted to multiples of ``step``."""
    step = Fraction(step)
    p = p if p is not None else A.initial_state()
    q = q if q is not None else B.initial_state()
    L = step.denominator
    for s in (p, q):
        for v in s.values:
            L = math.lcm(L, Fraction(v).denominator)
    unit = int(step * L)
    MA = [m * L for m in global_max(A)]
    MB = [m * L for m in global_max(B)]
    top = max(MA + MB + [0]) + L
    delays = list(range(unit, top + unit, unit))

    def clamp(vals, M):
        return tuple(v if v <= m else m + unit for v, m in zip(vals, M))

    def enc(s, M):
        return s.location, clamp(tuple(int(Fraction(v) * L) for v in s.values), M)

    autos = (A, B)
    maxes = (MA, MB)

    def act(k, st):
        Aut = autos[k]
        loc, vals = st
        out = []
        for e in Aut.outgoing(loc):
            if all(g.holds(Fraction(vals[Aut.clock_index[g.clock]], L)) for g in e.guard):
                nv = tuple(0 if c in e.resets else v for c, v in zip(Aut.clocks, vals))
                out.append((e.action, (e.target, nv)))
        return out

    def moves(pos):
        res = []
        for k in (0, 1):
            o = 1 - k
            for a, s2 in act(k, pos[k]):
                rs = [t for b, t in act(o, pos[o]) if b == a]
                res.append([(s2, t) if k == 0 else (t, s2) for t in rs])
            for d in delays:
                nxt = []
                for j in (0, 1):
                    loc, vals = pos[j]
                    nxt.append((loc, clamp(tuple(v + d for v in vals), maxes[j])))
                res.append([tuple(nxt)])
        return res

    start = (enc(p, MA), enc(q, MB))
    index = {start: 0}
    order = [start]
    table = []
    i = 0
    while i < len(order):
        mv = []
        for resps in moves(order[i]):
            ids = []
            for r in resps:
                j = index.get(r)
                if j is None:
                    j = index[r] = len(order)
                    order.append(r)
                ids.append(j)
            mv.append(ids)
        table.append(mv)
        i += 1
    bad = set()
    for _ in range(depth):
        new = {i for i, mv in enumerate(table)
               if i in bad or any(all(j in bad for j in ids) for ids in mv)}
        if new == bad:
            break
        bad = new
    return 0 not in bad
