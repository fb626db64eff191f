"""Command-line interface: exit codes, error context and golden json output."""

import json
import os
import shutil
import subprocess
import sys

import pytest

from conftest import GOLDEN, MODELS
from timedrel.cli import main

GOLDEN_CASES = {
    "check_timed_bisim": ["check", "--relation", "timed-bisim", "--emit-formula", "fast.json", "slow.json"],
    "check_prebisim_left": ["check", "--relation", "prebisim", "--fast-side", "left", "fast.json", "slow.json"],
    "check_prebisim_right": ["check", "--relation", "prebisim", "--fast-side", "right", "fast.json", "slow.json"],
    "check_ta_delay_oracle": ["check", "--relation", "ta-delay-bisim", "--oracle", "a_now.json", "a_later.json"],
    "zonegraph_fast": ["zonegraph", "fast.json"],
    "zonegraph_fast_rational": ["zonegraph", "--state", "l0:x=3/10", "fast.json"],
    "formula_fast_slow": ["formula", "fast.json", "slow.json"],
    "game_timed": ["game", "fast.json", "slow.json"],
    "hierarchy_pairs": ["hierarchy", "fast.json", "slow.json", "a_now.json", "a_later.json"],
}
EXIT = {"check_timed_bisim": 1, "check_prebisim_left": 0, "check_prebisim_right": 1,
        "check_ta_delay_oracle": 0, "zonegraph_fast": 0, "zonegraph_fast_rational": 0,
        "formula_fast_slow": 1, "game_timed": 1, "hierarchy_pairs": 0}


@pytest.fixture
def in_models(monkeypatch):
    monkeypatch.chdir(MODELS)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden_json(name, in_models, capsys):
    code, out, _ = run(capsys, GOLDEN_CASES[name] + ["--format", "json"])
    assert code == EXIT[name]
    expected = (GOLDEN / f"{name}.json").read_text()
    assert out == expected


def test_structured_alias(in_models, capsys):
    _, a, _ = run(capsys, ["formula", "fast.json", "slow.json", "--format", "json"])
    _, b, _ = run(capsys, ["formula", "fast.json", "slow.json", "--format", "structured"])
    assert a == b


def test_human_output(in_models, capsys):
    code, out, _ = run(capsys, ["check", "--relation", "timed-bisim", "--emit-trace", "fast.json", "slow.json"])
    assert code == 1
    assert out.splitlines() == [
        "timed-bisim: NOT RELATED", "refutation:",
        "  A delay 2: (l0, x=0) -> (l0, x=2)", "  B delay 2: (L0, y=0) -> (L0, y=2)",
        "  A a: (l0, x=2)", "  B cannot answer"]
    code, out, _ = run(capsys, ["formula", "fast.json", "slow.json"])
    assert out.strip() == "x1 in (EE(x1 = 2 && <a> tt))" and code == 1


def test_formula_restricted_to_initial_states(in_models, capsys):
    code, out, _ = run(capsys, ["check", "--relation", "timed-bisim", "--emit-formula",
                                "--state-a", "l0:x=1", "fast.json", "slow.json", "--format", "json"])
    assert code == 1 and json.loads(out)["formula"] is None


def test_game_options(in_models, capsys):
    code, out, _ = run(capsys, ["game", "--alpha", "a/d1,a/d2", "--beta", "either", "slow.json", "fast.json"])
    assert code == 0 and "(disjunct 2)" in out
    code, _, _ = run(capsys, ["game", "--rounds", "1", "fast.json", "slow.json"])
    assert code == 0
    code, _, _ = run(capsys, ["game", "--alpha", "a/eps,a/eps", "fast.json", "slow.json"])
    assert code == 0


def test_hierarchy_with_game_audit(in_models, capsys):
    code, out, _ = run(capsys, ["hierarchy", "--games", "fast.json", "slow.json", "--format", "json"])
    doc = json.loads(out)
    assert code == 0 and doc["game_audit"]["violations"] == []


@pytest.mark.parametrize("argv, fragment", [
    (["check", "--relation", "timed-bisim", "fast.json", "missing.json"], "missing.json"),
    (["check", "--relation", "timed-bisim", "--state-b", "L9", "fast.json", "slow.json"], "slow.json"),
    (["game", "--rounds", "2", "--alternations", "3", "fast.json", "slow.json"], "alternations"),
    (["hierarchy", "fast.json"], "pairs"),
    (["zonegraph", "--state", "l9", "fast.json"], "unknown location"),
])
def test_input_errors_exit_2(argv, fragment, in_models, capsys):
    code, _, err = run(capsys, argv)
    assert code == 2
    assert fragment in err


def test_bad_document_reports_position(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"clocks": ["x"],\n "locations": [l0]}')
    code, _, err = run(capsys, ["zonegraph", str(bad)])
    assert code == 2 and "bad.json" in err and "line 2" in err


def test_usage_error_exit_2(capsys):
    assert main(["check", "a.json"]) == 2
    assert main(["frobnicate"]) == 2


@pytest.mark.skipif(shutil.which("timedrel") is None, reason="console script not installed")
def test_console_script():
    out = subprocess.run(["timedrel", "formula", str(MODELS / "fast.json"), str(MODELS / "slow.json")],
                         capture_output=True, text=True)
    assert out.returncode == 1 and out.stdout.strip() == "x1 in (EE(x1 = 2 && <a> tt))"


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "timedrel", "check", "--relation", "prebisim",
                          str(MODELS / "fast.json"), str(MODELS / "slow.json")],
                         capture_output=True, text=True, env=os.environ)
    assert out.returncode == 0 and out.stdout.startswith("prebisim: RELATED")
