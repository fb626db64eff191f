"""Parametric games: configuration, worked plays, budget monotonicity."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from timedrel.games import GameConfig, GameConfigError, correspondence, hierarchy_audit, play
from timedrel.relations import Pair, RelationKind, decide
from timedrel.samples import random_pair, rename


def test_identical_automata_defender_wins(fast_slow):
    A = fast_slow[0]
    assert play(GameConfig(), A, None, rename(A), None).defender_wins


def test_fast_slow_timed_game(fast_slow):
    A, B = fast_slow
    out = play(correspondence("timed-bisim"), A, None, B, None)
    assert out.winner == "challenger"
    assert [(e["side"], e["move"], e["response"]) for e in out.trace] == [
        ("A", "delay 2", "delay 2"), ("A", "a", "FAIL")]
    assert out.alternation_count == 0


def test_prebisim_games(fast_slow):
    A, B = fast_slow
    assert play(correspondence("prebisim", "left"), A, None, B, None).defender_wins
    assert not play(correspondence("prebisim", "right"), A, None, B, None).defender_wins
    either = play(correspondence("prebisim", None), B, None, A, None)
    assert either.defender_wins and either.detail["disjunct"] == 2


def test_correspondence_table():
    assert correspondence("timed-bisim") == GameConfig(None, None, ("a/d", "a/d"))
    assert correspondence("ta-delay-bisim").alpha == ("a/eps", "eps.a/eps")
    for kind in RelationKind:
        cfg = correspondence(kind)
        if "sim" in kind.value and "bisim" not in kind.value:
            assert cfg.alternations == 0, kind
        cfg.validate()
    with pytest.raises(ValueError):
        correspondence("prebisim", "middle")


@pytest.mark.parametrize("cfg", [
    GameConfig(3, 2),
    GameConfig(None, -1),
    GameConfig(-1, None),
    GameConfig(alpha=("a/d", "eps")),
    GameConfig(alpha=("a/d1", "a/d2")),
    GameConfig(beta=("A", "<=")),
    GameConfig(alpha=("a/d1", "a/d2"), beta=("C", "<=")),
    GameConfig(sides=()),
])
def test_invalid_configs(cfg):
    with pytest.raises(GameConfigError):
        cfg.validate()


def test_describe():
    assert correspondence("timed-bisim").describe() == "inf-G_inf<a/d,a/d>"
    assert GameConfig(1, 3, ("a/eps", "a/eps")).describe() == "1-G_3<a/eps,a/eps>"
    assert correspondence("prebisim", None).describe() == \
        "inf-G_inf<a/d1,a/d2>[Z_A,<=] or inf-G_inf<a/d1,a/d2>[Z_B,<=]"


def test_zero_rounds_defender_wins(fast_slow):
    A, B = fast_slow
    assert play(GameConfig(0, 0), A, None, B, None).defender_wins
    assert play(GameConfig(0, 1), A, None, B, None).defender_wins
    assert not play(GameConfig(0, 2), A, None, B, None).defender_wins


def test_play_is_deterministic(fast_slow):
    A, B = fast_slow
    cfg = correspondence("timed-bisim")
    assert play(cfg, A, None, B, None).to_dict() == play(cfg, A, None, B, None).to_dict()


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 100_000))
def test_games_match_relations(seed):
    A, B = random_pair(random.Random(seed), n_clocks=1, max_const=3)
    pair = Pair(A, None, B, None)
    for kind in RelationKind:
        assert play(correspondence(kind), pair=pair).defender_wins == decide(kind, pair=pair).related, kind


@settings(max_examples=8, deadline=None)
@given(st.integers(0, 100_000))
def test_lemma_audit(seed):
    rng = random.Random(seed)
    pairs = [random_pair(rng, n_clocks=rng.choice((1, 2)), max_const=3) for _ in range(2)]
    report = hierarchy_audit(pairs)
    assert report.ok, report.violations
