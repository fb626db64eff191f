"""Zone graph construction: worked examples, invariants, and region quotient."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from conftest import grid
from graph_audit import audit
from timedrel.oracle import region_of
from timedrel.samples import build, random_automaton
from timedrel.zone_graph import (
    NoContainingNode, ZoneGraph, action_successors, build_zone_graph, delay_successor_nodes, node_of,
)


def _zones(G, loc):
    return [n.zone.render(G.automaton.clocks, G.scale) for n in G.nodes_at(loc)]


def test_fast_automaton_graph(fast_slow):
    A = fast_slow[0]
    G = build_zone_graph(A, A.initial_state())
    assert _zones(G, "l0") == ["0<=x<2", "x=2", "2<x"]
    assert _zones(G, "l1") == ["0<x"]
    lt2 = node_of(G, A.initial_state())
    assert [n.zone.render(["x"]) for n in delay_successor_nodes(G, lt2)] == ["0<=x<2", "x=2", "2<x"]
    eq2 = delay_successor_nodes(G, lt2)[1]
    assert [n.location for n in action_successors(G, eq2, "a")] == ["l1"]
    assert action_successors(G, lt2, "a") == set()
    assert sorted(G.delay_edges) == [(0, 1), (1, 2)]
    assert [(s, a, t) for s, a, t, _ in G.action_edges] == [(1, "a", 3)]
    assert audit(G) == []


def test_no_edges_single_node():
    A = build(["x"], [], locations=["l0"])
    G = ZoneGraph(A)
    assert _zones(G, "l0") == ["0<=x"]
    assert delay_successor_nodes(G, G.nodes[0]) == [G.nodes[0]]


def test_two_guards_partition():
    A = build(["x"], [("l0", "l1", "a", [("x", "=", 2)], ()), ("l0", "l2", "b", [("x", "=", 5)], ())])
    assert _zones(ZoneGraph(A), "l0") == ["0<=x<2", "x=2", "2<x<5", "x=5", "5<x"]


def test_node_of(fast_slow):
    A = fast_slow[0]
    G = ZoneGraph(A)
    assert node_of(G, A.state("l0", {"x": F(3, 2)})).zone.render(["x"]) == "0<=x<2"
    assert node_of(G, G.source_state).id == G.initial
    with pytest.raises(NoContainingNode):
        node_of(G, A.state("l1", {"x": 0}))


def test_rational_start_state(fast_slow):
    A = fast_slow[0]
    p = A.state("l0", {"x": F(3, 10)})
    G = ZoneGraph(A, p)
    assert G.scale == 10
    assert G.nodes[G.initial].zone.render(["x"], G.scale) == "3/10<=x<2"
    assert audit(G) == []


def test_to_dict_is_deterministic(fast_slow):
    A = fast_slow[0]
    assert ZoneGraph(A).to_dict() == ZoneGraph(A).to_dict()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 2))
def test_invariants_random(seed, n_clocks):
    rng = random.Random(seed)
    A = random_automaton(rng, rng.randint(2, 4), n_clocks, 4)
    assert audit(ZoneGraph(A)) == []


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 100_000))
def test_nodes_are_unions_of_regions(seed):
    rng = random.Random(seed)
    A = random_automaton(rng, 3, 2, 3)
    G = ZoneGraph(A)
    for loc in A.locations:
        if not G.nodes_at(loc):
            continue
        seen = {}
        for pt in grid(2, F(1, 4), 4):
            s = A.state(loc, dict(zip(A.clocks, pt)))
            try:
                nid = G.node_of(s).id
            except NoContainingNode:
                nid = None
            r = region_of(A, s)
            assert seen.setdefault(r, nid) == nid
