"""Relation deciders: worked examples and structural properties."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from timedrel.relations import (
    HIERARCHY_ORDER, Pair, RelationKind, check_hierarchy, cp_bisim, cp_prebisim, cp_sim,
    cp_sim_equiv, decide, ta_bisim, ta_moves, ta_sim_equiv, timed_moves,
)
from timedrel.samples import build, random_pair, rename

ALL_KINDS = [k.value for k in RelationKind]


def branching():
    """a.(b+c) + a.b versus a.(b+c): simulation equivalent, not bisimilar."""
    left = build(["x"], [("q0", "q1", "a", [], ()), ("q0", "q2", "a", [], ()),
                         ("q1", "q3", "b", [], ()), ("q1", "q5", "c", [], ()),
                         ("q2", "q4", "b", [], ())])
    right = build(["x"], [("p0", "p1", "a", [], ()), ("p1", "p2", "b", [], ()),
                          ("p1", "p3", "c", [], ())])
    return left, right


def test_fast_slow_timed_bisim(fast_slow):
    A, B = fast_slow
    v = cp_bisim(A, None, B, None)
    assert not v.related
    assert [(e["side"], e["kind"], e.get("label", e.get("amount"))) for e in v.refutation] == [
        ("A", "delay", "2"), ("B", "delay", "2"), ("A", "action", "a"), ("B", "FAIL", None)]
    d = v.to_dict()
    assert d["relation"] == "timed-bisim" and "refutation_trace" in d


def test_identity_and_renaming(fast_slow):
    A, _ = fast_slow
    assert cp_bisim(A, None, A, None).related
    assert cp_bisim(A, None, rename(A), None).related


def test_simulation_example(fast_slow):
    A = fast_slow[0]
    W = build(["y"], [("m0", "m1", "a", [("y", ">=", 0)], ())])
    assert cp_sim(A, None, W, None).related
    assert not cp_sim(W, None, A, None).related
    assert not cp_sim_equiv(A, None, W, None).related
    assert cp_sim_equiv(A, None, A, None).related


def test_prebisim_example(fast_slow):
    A, B = fast_slow
    assert cp_prebisim(A, None, B, None).related
    assert not cp_prebisim(B, None, A, None).related
    assert cp_prebisim(A, None, A, None).related
    assert decide("prebisim", A, None, B, None, fast_side="left").related
    assert not decide("prebisim", A, None, B, None, fast_side="right").related


def test_time_abstracted_examples(fast_slow, a_now_later):
    A, B = fast_slow
    for flavor in ("strong", "delay", "observational"):
        assert ta_bisim(A, None, B, None, flavor).related
        assert ta_bisim(A, None, A, None, flavor).related
    N, L = a_now_later
    assert not ta_bisim(N, None, L, None, "strong").related
    assert ta_bisim(N, None, L, None, "delay").related
    assert ta_bisim(N, None, L, None, "observational").related
    with pytest.raises(ValueError):
        ta_bisim(N, None, L, None, "weak")


def test_branching_sim_equiv_not_bisim():
    left, right = branching()
    assert ta_sim_equiv(left, None, right, None).related
    assert not ta_bisim(left, None, right, None).related
    assert cp_sim_equiv(left, None, right, None).related
    assert not cp_bisim(left, None, right, None).related


def test_hierarchy_reports(fast_slow):
    A, B = fast_slow
    rep = check_hierarchy(A, None, B, None)
    got = {k.value: v.related for k, v in rep.verdicts.items()}
    assert {k: got[k] for k in ("timed-bisim", "prebisim", "ta-bisim", "ta-delay-bisim",
                                "ta-obs-bisim")} == {
        "timed-bisim": False, "prebisim": True, "ta-bisim": True, "ta-delay-bisim": True,
        "ta-obs-bisim": True}
    assert rep.monotone
    same = check_hierarchy(A, None, A, None)
    assert all(v.related for v in same.verdicts.values()) and same.monotone
    assert list(rep.verdicts) == HIERARCHY_ORDER


def test_rational_start_states(fast_slow):
    A, B = fast_slow
    p = A.parse_state("l0:x=3/10")
    q = B.parse_state("L0:y=33/10")
    # both have 17/10 left until their a-edge
    assert cp_bisim(A, p, B, q).related
    assert not cp_bisim(A, p, B, B.parse_state("L0:y=3")).related


seeds = st.integers(0, 100_000)


def _closed(pair, verdict, moves):
    W = verdict.witness
    for pos in W:
        for _, resps in moves(pos):
            if not any(p2 in W for _, p2 in resps):
                return False
    return True


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_witnesses_are_closed(seed):
    A, B = random_pair(random.Random(seed), n_clocks=random.Random(seed).choice((1, 2)), max_const=3)
    pair = Pair(A, None, B, None)
    v = cp_bisim(pair=pair)
    if v.related:
        assert _closed(pair, v, lambda pos: timed_moves(pair.space, pos))
    for flavor in ("strong", "delay", "observational"):
        v = ta_bisim(pair=pair, flavor=flavor)
        if v.related:
            graphs = (pair.GA, pair.GB)
            assert _closed(pair, v, lambda pos: ta_moves(graphs, pos, flavor))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_bisimulations_symmetric(seed):
    A, B = random_pair(random.Random(seed), n_clocks=1, max_const=3)
    for kind in ("timed-bisim", "ta-bisim", "ta-delay-bisim", "ta-obs-bisim",
                 "timed-sim-equiv", "ta-sim-equiv"):
        assert decide(kind, A, None, B, None).related == decide(kind, B, None, A, None).related
    assert decide("prebisim", A, None, B, None, fast_side="right").related == \
        decide("prebisim", B, None, A, None, fast_side="left").related


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_reflexive(seed):
    A, _ = random_pair(random.Random(seed), n_clocks=2, max_const=3)
    for kind in ALL_KINDS:
        assert decide(kind, A, None, A, None).related, kind


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_transitive_on_triples(seed):
    rng = random.Random(seed)
    A, B = random_pair(rng, n_clocks=1, max_const=3)
    _, C = random_pair(random.Random(seed + 1), n_clocks=1, max_const=3)
    C = rng.choice((C, rename(B), rename(A)))
    for kind in ("timed-bisim", "ta-bisim", "ta-obs-bisim", "ta-sim-equiv"):
        ab = decide(kind, A, None, B, None).related
        bc = decide(kind, B, None, C, None).related
        if ab and bc:
            assert decide(kind, A, None, C, None).related, kind


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_bisim_implies_sim_equiv(seed):
    A, B = random_pair(random.Random(seed), n_clocks=2, max_const=3)
    assert check_hierarchy(A, None, B, None).monotone
