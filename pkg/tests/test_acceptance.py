"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run ``pytest -s tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``
to see the report.  Random instances come from fixed seeds.
"""

import random
import sys
import time
from fractions import Fraction as F
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from graph_audit import audit  # noqa: E402
from timedrel.automaton import TAState, tlts_step  # noqa: E402
from timedrel.formula import (  # noqa: E402
    evaluate, is_closed, parse_formula, render_formula, synthesize_distinguishing,
)
from timedrel.games import correspondence, hierarchy_audit, play  # noqa: E402
from timedrel.oracle import grid_timed_bisim, region_bisim  # noqa: E402
from timedrel.relations import (  # noqa: E402
    Pair, RelationKind, check_hierarchy, cp_bisim, decide, ta_bisim,
)
from timedrel.samples import build, fast_slow_pair, random_automaton, random_pair  # noqa: E402
from timedrel.zone import Zone, split_by_guard  # noqa: E402
from timedrel.zone_graph import ZoneGraph  # noqa: E402


RESULTS = []   # collected lines, echoed in the pytest terminal summary


def report(n, ok, detail):
    line = f"AC{n} {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, detail


def _pairs(seed, count, clocks=(1, 2), max_const=3):
    rng = random.Random(seed)
    return [random_pair(rng, n_clocks=rng.choice(clocks), max_const=max_const) for _ in range(count)]


def test_ac1_canonical_pair():
    t0 = time.perf_counter()
    A, B = fast_slow_pair()
    pre = decide("prebisim", A, None, B, None, fast_side="left").related
    tb = decide("timed-bisim", A, None, B, None).related
    ta = ta_bisim(A, None, B, None, "strong").related
    mono = check_hierarchy(A, None, B, None).monotone
    dt = time.perf_counter() - t0
    ok = pre and not tb and ta and mono and dt < 1.0
    report(1, ok, f"prebisim(left)={pre} timed-bisim={tb} ta-bisim={ta} monotone={mono} in {dt:.3f}s")


def test_ac2_canonical_decomposition():
    pieces = split_by_guard(Zone.universe(2), [(1, "<=", 2), (2, ">", 1)])
    got = sorted(p.render(["x", "y"]) for p in pieces)
    want = sorted(["0<=x<=2 & 0<=y<=1", "2<x & 0<=y<=1", "0<=x<=2 & 1<y", "2<x & 1<y"])
    report(2, got == want, f"{len(got)} zones: {got}")


def test_ac3_tlts_trace():
    A = build(["x", "y"], [("l", "l'", "a", [("x", "<", 1), ("y", ">", 2)], ["y"])])
    s = A.state("l", {"x": F(3, 10), "y": F(16, 10)})
    mid = tlts_step(A, s, F(1, 2))
    end = {t for m in mid for t in tlts_step(A, m, "a")}
    ok = mid == {TAState("l", (F(4, 5), F(21, 10)))} and end == {TAState("l'", (F(4, 5), 0))}
    shown = [t.render(A.clocks) for t in sorted(mid | end, key=repr)]
    report(3, ok, f"states {shown}")


def test_ac4_zone_graph_invariants():
    rng = random.Random(4)
    bad, sizes = [], []
    t0 = time.perf_counter()
    for k in range(200):
        A = random_automaton(rng, rng.randint(2, 6), rng.choice((1, 2)), rng.choice((2, 4, 8, 16)))
        G = ZoneGraph(A)
        sizes.append(len(G.nodes))
        problems = audit(G)
        if problems:
            bad.append((k, problems[:2]))
    dt = time.perf_counter() - t0
    report(4, not bad, f"200 automata, {sum(sizes)} nodes, {len(bad)} with violations "
                       f"({dt:.1f}s) {bad[:3]}")


def test_ac5_region_oracle():
    pairs = _pairs(5, 100, clocks=(1, 2), max_const=3)
    disagree, related = [], 0
    for k, (A, B) in enumerate(pairs):
        ours = ta_bisim(A, None, B, None, "strong").related
        related += ours
        if ours != region_bisim(A, None, B, None, "strong"):
            disagree.append(k)
    report(5, not disagree, f"100 pairs ({related} bisimilar), disagreements at {disagree}")


def test_ac6_grid_oracle():
    one = _pairs(6, 100, clocks=(1,), max_const=4)
    disagree, refuted = [], 0
    for k, (A, B) in enumerate(one):
        cp = cp_bisim(A, None, B, None).related
        grid = grid_timed_bisim(A, None, B, None, step=F(1, 2), depth=12)
        refuted += not grid
        if cp != grid:
            disagree.append(k)
    two = _pairs(66, 30, clocks=(2,), max_const=3)
    missed, grid_refuted = [], 0
    for k, (A, B) in enumerate(two):
        if not grid_timed_bisim(A, None, B, None, step=F(1, 2), depth=12):
            grid_refuted += 1
            if cp_bisim(A, None, B, None).related:
                missed.append(k)
    ok = not disagree and not missed
    report(6, ok, f"1-clock: 100 pairs, {refuted} grid refutations, disagreements {disagree}; "
                  f"2-clock: {grid_refuted}/30 grid refutations, not confirmed by cp: {missed}")


def test_ac7_hierarchy():
    pairs = _pairs(7, 100, clocks=(1, 2), max_const=3)
    violations = []
    positives = dict.fromkeys((k.value for k in RelationKind if k is not RelationKind.TIMED_SIM), 0)
    for k, (A, B) in enumerate(pairs):
        rep = check_hierarchy(A, None, B, None)
        for kind, v in rep.verdicts.items():
            positives[kind.value] += v.related
        if rep.violations:
            violations.append((k, rep.to_dict()["violations"]))
    report(7, not violations, f"100 pairs, violations {violations}; positives {positives}")


def test_ac8_games_agree():
    pairs = _pairs(8, 30, clocks=(1, 2), max_const=3)
    mismatches = []
    for k, (A, B) in enumerate(pairs):
        pair = Pair(A, None, B, None)
        for kind in RelationKind:
            if play(correspondence(kind), pair=pair).defender_wins != decide(kind, pair=pair).related:
                mismatches.append((k, kind.value))
    audit_report = hierarchy_audit(pairs)
    ok = not mismatches and audit_report.ok
    report(8, ok, f"30 pairs x 10 kinds, mismatches {mismatches}; lemma audit "
                  f"{len(audit_report.checks)} checks, {len(audit_report.violations)} violations")


def test_ac9_formula_soundness():
    rng = random.Random(9)
    tried = found = 0
    failures = []
    while found < 60 and tried < 400:
        tried += 1
        A, B = random_pair(rng, n_clocks=rng.choice((1, 2)), max_const=3)
        if cp_bisim(A, None, B, None).related:
            continue
        found += 1
        phi = synthesize_distinguishing(A, B, check=False)
        if not (is_closed(phi) and evaluate(phi, A) and not evaluate(phi, B)):
            failures.append(render_formula(phi))
    A, B = fast_slow_pair()
    canonical = render_formula(synthesize_distinguishing(A, B))
    ok = found >= 50 and not failures and canonical == "x1 in (EE(x1 = 2 && <a> tt))"
    report(9, ok, f"{found} non-bisimilar pairs, {len(failures)} unsound formulas; "
                  f"canonical pair -> {canonical}")


def test_ac10_formula_round_trip():
    text = "x1 in (<a>[b] x2 in (<c> EE(1 < x2 < 2 && <d> tt)))"
    out = render_formula(parse_formula(text))
    report(10, out == text, f"rendered {out!r}")


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_ac"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
