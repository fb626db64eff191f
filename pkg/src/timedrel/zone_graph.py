"""Per-automaton pre-stable zone graph.

Phase 1 is a forward exploration: every zone is split by the atomic guards
of its location's outgoing edges, closed under delay, abstracted with the
location-dependent max constants, and propagated along edges.  Phase 2
refines the zones until each one is pre-stable with respect to the delay
predecessors and edge predecessors of every other zone.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .automaton import Edge, TAState, TimedAutomaton, common_scale, max_constants
from .zone import (INF, Zone, bound, bound_strict, bound_value, convex_merge,
                   edge_preds, guard_zone, split_by_guard, split_prestable)

log = logging.getLogger(__name__)


class NoContainingNode(LookupError):
    """The state is not covered by any node of the zone graph."""


@dataclass(frozen=True)
class Node:
    id: int
    location: str
    zone: Zone

    def render(self, G: "ZoneGraph") -> str:
        return f"({self.location}, {self.zone.render(G.automaton.clocks, G.scale)})"


def _corner_in_zone(z: Zone, raw) -> bool:
    """Membership of a corner valuation ``raw`` = ((base, coef), ...) in ``z``."""
    n = z.n
    m = z.m
    for i in range(n):
        bi, ki = (0, 0) if i == 0 else raw[i - 1]
        row = i * n
        for j in range(n):
            if i == j:
                continue
            b = m[row + j]
            if b == INF:
                continue
            bj, kj = (0, 0) if j == 0 else raw[j - 1]
            diff = bi - bj
            c = b >> 1
            if diff > c:
                return False
            if diff == c:
                k = ki - kj
                if k > 0 or (k == 0 and not (b & 1)):
                    return False
    return True


def _zone_key(z: Zone):
    """Order zones by lower bounds, then upper bounds, then the full matrix."""
    n = z.n
    return (tuple(-z.m[i] for i in range(1, n)), tuple(z.m[i * n] for i in range(1, n)), z.m)


class ZoneGraph:
    """Nodes, action edges and immediate delay successors of one automaton."""

    def __init__(self, A: TimedAutomaton, p: TAState | None = None, scale: int | None = None):
        self.automaton = A
        self.source_state = p if p is not None else A.initial_state()
        base = common_scale(self.source_state)
        if scale is None:
            scale = base
        elif scale % base:
            raise ValueError(f"scale {scale} is not a multiple of {base}")
        self.scale = scale
        self.maxes = max_constants(A)
        n = len(A.clocks)
        self.nclocks = n
        L = scale
        self._mvec = {l: (0,) + tuple(c * L for c in self.maxes.vector(l)) for l in A.locations}
        self._atoms = {}
        self._edge_info = {}
        for l in A.locations:
            atoms = []
            for e in A.outgoing(l):
                for g in e.guard:
                    atoms.append((A.clock_index[g.clock] + 1, g.op, g.const * L))
            self._atoms[l] = sorted(set(atoms))
        for e in A.edges:
            gz = guard_zone(n, [(A.clock_index[g.clock] + 1, g.op, g.const * L) for g in e.guard])
            resets = tuple(sorted(A.clock_index[c] + 1 for c in e.resets))
            self._edge_info[e] = (gz, resets)
        self._zones: dict[str, list[Zone]] = {l: [] for l in A.locations}
        self._phase1()
        self._phase2()
        self._finish()

    # ------------------------------------------------------------------ phase 1
    def _straddles(self, l, z: Zone, i: int) -> bool:
        """True if ``z`` has points on both sides of max_x^l and a real diagonal on x_i."""
        M = self._mvec[l][i]
        n = z.n
        lo = -bound_value(z.m[i])                  # lower bound value
        hi = z.m[i * n]
        if lo > M or (lo == M and bound_strict(z.m[i])):
            return False
        if hi != INF and (bound_value(hi) < M or (bound_value(hi) == M)):
            return False
        for j in range(1, n):
            if j == i:
                continue
            for a, b in ((i, j), (j, i)):
                e = z.m[a * n + b]
                if e == INF:
                    continue
                ha, lb = z.m[a * n], z.m[b]
                if ha != INF and (ha + lb - ((ha | lb) & 1)) <= e:
                    continue  # implied by absolute bounds
                return True
        return False

    def _abstract(self, l, z: Zone) -> list[Zone]:
        out = []
        todo = split_by_guard(z, self._atoms[l])
        mv = self._mvec[l]
        while todo:
            p = todo.pop()
            for i in range(1, p.n):
                if self._straddles(l, p, i):
                    M = mv[i]
                    todo.append(p.constrain(i, 0, bound(M, False)))
                    todo.append(p.constrain(0, i, bound(-M, True)))
                    break
            else:
                out.append(p.extrapolate(mv))
        return out

    def _mergeable(self, l, h: Zone) -> bool:
        if len(split_by_guard(h, self._atoms[l])) != 1:
            return False
        if h.extrapolate(self._mvec[l]) != h:
            return False
        return not any(self._straddles(l, h, i) for i in range(1, h.n))

    def _add(self, l, z: Zone) -> bool:
        zones = self._zones[l]
        todo = [z]
        for w in zones:
            nxt = []
            for t in todo:
                nxt.extend(t.subtract(w))
            todo = nxt
            if not todo:
                return False
        for t in todo:
            for k, w in enumerate(zones):
                h = convex_merge(w, t)
                if h is not None and self._mergeable(l, h):
                    zones[k] = h
                    break
            else:
                zones.append(t)
        return True

    def _insert(self, l, z: Zone) -> bool:
        changed = False
        for piece in self._abstract(l, z):
            changed |= self._add(l, piece)
        return changed

    def _phase1(self):
        A = self.automaton
        p = self.source_state
        L = self.scale
        start = Zone.point([int(Fraction(v) * L) for v in p.values])
        if any(Fraction(v) * L != int(Fraction(v) * L) for v in p.values):
            raise ValueError("scale does not clear the denominators of the source state")
        self._insert(p.location, start.up())
        queue = deque([(p.location, None)])
        while queue:
            l, parent = queue.popleft()
            changed = parent is None
            if parent is not None:
                for e in A.outgoing(parent):
                    if e.target != l:
                        continue
                    gz, resets = self._edge_info[e]
                    for z in list(self._zones[parent]):
                        succ = z.up().intersect(gz).reset(resets)
                        if succ:
                            changed |= self._insert(l, succ)
            while True:
                grew = False
                for z in list(self._zones[l]):
                    grew |= self._insert(l, z.up())
                if not grew:
                    break
                changed = True
            if changed:
                for l2 in sorted({e.target for e in A.outgoing(l)}, key=A.locations.index):
                    queue.append((l2, l))

    # ------------------------------------------------------------------ phase 2
    def _phase2(self):
        A = self.automaton
        incoming = {l: [] for l in A.locations}
        for e in A.edges:
            incoming[e.target].append(e)
        zones = {l: set(zs) for l, zs in self._zones.items()}
        work = deque((l, z) for l in A.locations for z in sorted(zones[l]))
        steps = 0
        while work:
            l2, z2 = work.popleft()
            if z2 not in zones[l2]:
                continue
            steps += 1
            if steps > 200000:
                raise RuntimeError("zone graph refinement did not converge")
            splitters = [(l2, z2.down())]
            for e in incoming[l2]:
                gz, resets = self._edge_info[e]
                splitters.append((e.source, edge_preds(z2, gz, resets)))
            for l1, pre in splitters:
                if not pre:
                    continue
                for w in sorted(zones[l1]):
                    pieces = split_prestable(w, pre)
                    if len(pieces) > 1:
                        zones[l1].discard(w)
                        for q in pieces:
                            zones[l1].add(q)
                            work.append((l1, q))
        self._zones = {l: sorted(zs) for l, zs in zones.items()}

    # ------------------------------------------------------------------ finish
    def _finish(self):
        A = self.automaton
        order = {l: k for k, l in enumerate(A.locations)}
        pairs = sorted(((l, z) for l, zs in self._zones.items() for z in zs),
                       key=lambda t: (order[t[0]], _zone_key(t[1])))
        self.nodes = [Node(k, l, z) for k, (l, z) in enumerate(pairs)]
        self._by_loc = {l: [] for l in A.locations}
        for nd in self.nodes:
            self._by_loc[nd.location].append(nd)
        # action edges
        self.action_edges = []
        self._act = {nd.id: [] for nd in self.nodes}
        for n1 in self.nodes:
            for e in A.outgoing(n1.location):
                gz, resets = self._edge_info[e]
                for n2 in self._by_loc[e.target]:
                    pre = edge_preds(n2.zone, gz, resets)
                    if n1.zone.intersect(pre):
                        self.action_edges.append((n1.id, e.action, n2.id, e))
                        self._act[n1.id].append((e.action, n2.id, e))
        # delay successors
        reach = {}
        for n1 in self.nodes:
            reach[n1.id] = {n2.id for n2 in self._by_loc[n1.location]
                            if n2.id != n1.id and n1.zone.intersect(n2.zone.down())}
        self._reach = reach
        self.delay_edges = set()
        self._imm = {}
        for n1 in self.nodes:
            S = reach[n1.id]
            imm = [m for m in S if reach[m] >= S - {m}]
            if S:
                if len(imm) != 1:
                    raise RuntimeError(f"delay successors of node {n1.id} are not a chain")
                self._imm[n1.id] = imm[0]
                self.delay_edges.add((n1.id, imm[0]))
        self._chain = {}
        for n1 in self.nodes:
            ch = [n1.id]
            while ch[-1] in self._imm:
                ch.append(self._imm[ch[-1]])
            self._chain[n1.id] = ch
        self._locate_cache = {}
        self.initial = self.node_of(self.source_state).id

    # ------------------------------------------------------------------ queries
    def node(self, nid: int) -> Node:
        return self.nodes[nid]

    def nodes_at(self, location: str) -> list[Node]:
        return self._by_loc[location]

    def max_vector(self, location: str) -> tuple[int, ...]:
        """Scaled max constants of ``location`` (index 0 is the reference clock)."""
        return self._mvec[location]

    def edge_info(self, e: Edge):
        return self._edge_info[e]

    def node_of(self, s: TAState) -> Node:
        if s.location not in self._by_loc:
            raise NoContainingNode(f"unknown location {s.location!r}")
        vals = [Fraction(v) * self.scale for v in s.values]
        for nd in self._by_loc[s.location]:
            if nd.zone.contains(vals):
                return nd
        raise NoContainingNode(f"no node contains {s.render(self.automaton.clocks)}")

    def locate(self, location: str, raw) -> int:
        """Node id containing a corner valuation (scaled bases with δ-coefficients)."""
        key = (location, raw)
        nid = self._locate_cache.get(key)
        if nid is None:
            for nd in self._by_loc[location]:
                if _corner_in_zone(nd.zone, raw):
                    nid = nd.id
                    break
            else:
                raise NoContainingNode(f"no node of {location} contains corner {raw}")
            self._locate_cache[key] = nid
        return nid

    def delay_chain(self, nid: int) -> list[int]:
        """Delay successors in time order, starting with ``nid`` itself."""
        return self._chain[nid]

    def delay_reachable(self, nid: int) -> set[int]:
        return self._reach[nid] | {nid}

    def action_succ(self, nid: int):
        """List of ``(action, target node id, edge)``."""
        return self._act[nid]

    def to_dict(self) -> dict:
        A = self.automaton
        return {
            "scale": self.scale,
            "initial": self.initial,
            "nodes": [{"id": nd.id, "location": nd.location,
                       "zone": nd.zone.render(A.clocks, self.scale)} for nd in self.nodes],
            "edges": sorted(
                [{"from": s, "to": t, "label": a} for s, a, t, _ in self.action_edges]
                + [{"from": s, "to": t, "label": "eps"} for s, t in self.delay_edges],
                key=lambda d: (d["from"], d["to"], d["label"])),
        }


def build_zone_graph(A: TimedAutomaton, p: TAState | None = None, scale: int | None = None) -> ZoneGraph:
    return ZoneGraph(A, p, scale)


def node_of(G: ZoneGraph, s: TAState) -> Node:
    return G.node_of(s)


def delay_successor_nodes(G: ZoneGraph, n: Node) -> list[Node]:
    return [G.nodes[i] for i in G.delay_chain(n.id)]


def action_successors(G: ZoneGraph, n: Node, a: str) -> set[Node]:
    return {G.nodes[t] for act, t, _ in G.action_succ(n.id) if act == a}
