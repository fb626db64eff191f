"""Example automata and a random instance generator for tests and benchmarks."""

from __future__ import annotations

import random

from .automaton import ClockConstraint, Edge, TimedAutomaton, automaton_from_dict

OPS = ("<", "<=", "=", ">=", ">")


def single_edge(guard_const: int, clock: str = "x", loc_prefix: str = "l") -> TimedAutomaton:
    """Two locations joined by one ``a``-edge guarded by ``clock = guard_const``."""
    return automaton_from_dict({
        "clocks": [clock], "actions": ["a"],
        "locations": [f"{loc_prefix}0", f"{loc_prefix}1"], "initial": f"{loc_prefix}0",
        "edges": [{"from": f"{loc_prefix}0", "to": f"{loc_prefix}1", "action": "a",
                   "guard": [{"clock": clock, "op": "=", "const": guard_const}], "resets": []}],
    })


def build(clocks, edges, locations=None, actions=None, initial=None) -> TimedAutomaton:
    """Compact constructor: ``edges`` are ``(src, dst, action, guard, resets)``
    with ``guard`` a sequence of ``(clock, op, const)`` triples."""
    locs = list(locations) if locations else []
    for src, dst, *_ in edges:
        for l in (src, dst):
            if l not in locs:
                locs.append(l)
    locs = locs or ["l0"]
    acts = list(actions) if actions else sorted({e[2] for e in edges}) or ["a"]
    return TimedAutomaton(list(clocks), acts, locs, initial or locs[0], [
        Edge(src, a, dst, tuple(ClockConstraint(c, op, k) for c, op, k in guard), frozenset(resets))
        for src, dst, a, guard, resets in edges])


def fast_slow_pair():
    """The fast/slow example: ``a`` exactly at time 2 versus exactly at time 5."""
    return single_edge(2, "x", "l"), single_edge(5, "y", "L")


def random_automaton(rng: random.Random, n_locs=3, n_clocks=1, max_const=3,
                     actions=("a", "b"), n_edges=None, name="") -> TimedAutomaton:
    clocks = ["x", "y", "z"][:n_clocks]
    locs = [f"l{i}" for i in range(n_locs)]
    if n_edges is None:
        n_edges = rng.randint(max(1, n_locs - 1), n_locs + 2)
    edges = []
    for k in range(n_edges):
        src = locs[rng.randrange(k)] if 0 < k < n_locs else rng.choice(locs)
        dst = locs[k] if 0 < k < n_locs else rng.choice(locs)
        if k == 0:
            src = locs[0]
        guard = []
        for _ in range(rng.choice((0, 1, 1, 2))):
            guard.append(ClockConstraint(rng.choice(clocks), rng.choice(OPS),
                                         rng.randint(0, max_const)))
        resets = frozenset(c for c in clocks if rng.random() < 0.3)
        edges.append(Edge(src, rng.choice(actions), dst, tuple(guard), resets))
    return TimedAutomaton(clocks, actions, locs, locs[0], edges, name=name)


def rename(A: TimedAutomaton, rng: random.Random | None = None) -> TimedAutomaton:
    """Isomorphic copy with renamed clocks/locations and shuffled edge order."""
    cmap = {c: c.upper() + "'" for c in A.clocks}
    lmap = {l: "m" + l[1:] if l.startswith("l") else l + "'" for l in A.locations}
    edges = [Edge(lmap[e.source], e.action, lmap[e.target],
                  tuple(ClockConstraint(cmap[g.clock], g.op, g.const) for g in e.guard),
                  frozenset(cmap[c] for c in e.resets)) for e in A.edges]
    if rng is not None:
        rng.shuffle(edges)
    return TimedAutomaton([cmap[c] for c in A.clocks], A.actions,
                          [lmap[l] for l in A.locations], lmap[A.initial], edges)


def mutate(A: TimedAutomaton, rng: random.Random, max_const=3) -> TimedAutomaton:
    """Copy with one small random change (usually, but not always, observable)."""
    edges = list(A.edges)
    if not edges:
        return A
    k = rng.randrange(len(edges))
    e = edges[k]
    choice = rng.randrange(5)
    if choice == 0 and e.guard:
        g = e.guard[0]
        c = max(0, min(max_const, g.const + rng.choice((-1, 1))))
        e = Edge(e.source, e.action, e.target, (ClockConstraint(g.clock, g.op, c),) + e.guard[1:], e.resets)
    elif choice == 1 and e.guard:
        g = e.guard[0]
        e = Edge(e.source, e.action, e.target,
                 (ClockConstraint(g.clock, rng.choice(OPS), g.const),) + e.guard[1:], e.resets)
    elif choice == 2:
        c = rng.choice(A.clocks)
        e = Edge(e.source, e.action, e.target, e.guard, e.resets ^ {c})
    elif choice == 3 and len(A.actions) > 1:
        e = Edge(e.source, rng.choice([a for a in A.actions if a != e.action]), e.target, e.guard, e.resets)
    else:
        e = Edge(e.source, e.action, rng.choice(A.locations), e.guard, e.resets)
    edges[k] = e
    return TimedAutomaton(A.clocks, A.actions, A.locations, A.initial, edges)


def unfold(A: TimedAutomaton, rng: random.Random) -> TimedAutomaton:
    """Bisimilar copy: duplicate a location and redirect some incoming edges to it."""
    target = rng.choice(A.locations)
    dup = target + "_d"
    edges = list(A.edges)
    edges += [Edge(dup, e.action, e.target, e.guard, e.resets) for e in A.edges if e.source == target]
    edges = [Edge(e.source, e.action, dup if e.target == target and rng.random() < 0.5 else e.target,
                  e.guard, e.resets) for e in edges]
    return TimedAutomaton(A.clocks, A.actions, list(A.locations) + [dup], A.initial, edges)


def random_pair(rng: random.Random, n_clocks=1, max_const=3, n_locs=None, actions=("a", "b")):
    """A pair of automata drawn from a mix of related and unrelated constructions."""
    if n_locs is None:
        n_locs = rng.randint(2, 4)
    A = random_automaton(rng, n_locs, n_clocks, max_const, actions)
    mode = rng.choice(("copy", "mutate", "mutate", "unfold", "independent", "unfold-mutate"))
    if mode == "copy":
        B = rename(A, rng)
    elif mode == "mutate":
        B = rename(mutate(A, rng, max_const), rng)
    elif mode == "unfold":
        B = rename(unfold(A, rng), rng)
    elif mode == "unfold-mutate":
        B = rename(mutate(unfold(A, rng), rng, max_const), rng)
    else:
        B = rename(random_automaton(rng, n_locs, n_clocks, max_const, actions), rng)
    return A, B
