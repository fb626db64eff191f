"""Brute-force oracles: region graph, region bisimulation, grid game."""

import itertools
import random
from fractions import Fraction as F

from hypothesis import given, settings, strategies as st

from timedrel.automaton import TAState
from timedrel.oracle import (
    all_regions, global_max, grid_timed_bisim, region_bisim, region_count_bound, region_graph,
    region_of,
)
from timedrel.samples import build, random_automaton, rename


def test_one_clock_regions(fast_slow):
    A = fast_slow[0]
    per_loc = [r for r in all_regions(A) if r[0] == "l0"]
    assert len(per_loc) == 6
    pts = [0, F(1, 2), 1, F(3, 2), 2, 3]
    assert len({region_of(A, A.state("l0", {"x": v})) for v in pts}) == 6


def test_zero_clocks():
    A = build([], [("l0", "l1", "a", [], ())])
    assert len(all_regions(A)) == 2


def test_a_edge_only_from_equality_region(fast_slow):
    A = fast_slow[0]
    G = region_graph(A)
    sources = [r for r, edges in G.succ.items() if any(a == "a" for a, _ in edges)]
    assert sources == [region_of(A, A.state("l0", {"x": 2}))]


def test_region_bisim_examples(fast_slow, a_now_later):
    A, B = fast_slow
    assert region_bisim(A, None, B, None, "strong")
    assert region_bisim(A, None, A, None, "strong")
    N, L = a_now_later
    assert not region_bisim(N, None, L, None, "strong")
    assert region_bisim(N, None, L, None, "delay")


def test_grid_examples(fast_slow):
    A, B = fast_slow
    assert not grid_timed_bisim(A, None, B, None, step=F(1, 2), depth=12)
    assert grid_timed_bisim(A, None, A, None, step=F(1, 2), depth=12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_region_count_matches_sampling(seed):
    A = random_automaton(random.Random(seed), 2, 2, 2)
    M = global_max(A)
    regions = [r for r in all_regions(A) if r[0] == "l0"]
    assert len(regions) <= region_count_bound(M)
    ticks = [F(k, 3) for k in range(3 * (max(M) + 2))]
    sampled = {region_of(A, TAState("l0", pt)) for pt in itertools.product(ticks, repeat=2)}
    assert sampled == set(regions)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_region_bisim_invariant_under_renaming(seed):
    A = random_automaton(random.Random(seed), 3, 2, 3)
    for flavor in ("strong", "delay", "observational"):
        assert region_bisim(A, None, rename(A), None, flavor)
