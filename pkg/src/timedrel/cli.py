"""Command-line interface: ``timedrel {check,zonegraph,game,formula,hierarchy}``.

Exit status: 0 related / defender wins / success, 1 not related / challenger
wins, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .automaton import AutomatonError, load_automaton
from .formula import NotDistinguishable, render_formula, synthesize_distinguishing
from .games import GameConfig, GameConfigError, hierarchy_audit, play
from .relations import Pair, RelationKind, check_hierarchy, decide
from .zone_graph import NoContainingNode, ZoneGraph

RELATIONS = [k.value for k in RelationKind]


def _emit(args, data: dict, human: str):
    if args.format in ("json", "structured"):
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(human)


def _load_pair(args):
    A = load_automaton(args.a)
    B = load_automaton(args.b)
    return A, _state(A, args.a, args.state_a), B, _state(B, args.b, args.state_b)


def _state(A, path, text):
    try:
        return A.parse_state(text)
    except AutomatonError as exc:
        raise AutomatonError(f"{path}: state {text!r}: {exc}") from None


def _human_trace(trace):
    lines = []
    for e in trace:
        if e["kind"] == "FAIL":
            lines.append(f"  {e['side']} cannot answer")
            continue
        what = e.get("label") if e["kind"] == "action" else f"delay {e.get('amount')}"
        to = f" -> {e['to']}" if "to" in e else ""
        lines.append(f"  {e['side']} {what}: {e['from']}{to}")
    return "\n".join(lines)


def cmd_check(args) -> int:
    A, p, B, q = _load_pair(args)
    pair = Pair(A, p, B, q)
    verdict = decide(args.relation, pair=pair, fast_side=args.fast_side)
    data = verdict.to_dict()
    if args.relation == "prebisim":
        data["fast_side"] = args.fast_side
    human = [f"{args.relation}: {'RELATED' if verdict.related else 'NOT RELATED'}"]
    if verdict.related:
        human.append(f"witness size: {verdict.witness_size}")
    elif args.emit_trace:
        human.append("refutation:")
        human.append(_human_trace(verdict.refutation))
    else:
        human.append("(use --emit-trace to print the refutation)")
    if args.emit_formula:
        initial = p == A.initial_state() and q == B.initial_state()
        if args.relation != "timed-bisim":
            data["formula"] = None
            human.append("formula: only available for timed-bisim")
        elif not initial:
            data["formula"] = None
            human.append("formula: synthesis is restricted to initial states")
        elif verdict.related:
            data["formula"] = None
            human.append("formula: none (states are bisimilar)")
        else:
            f = render_formula(synthesize_distinguishing(A, B))
            data["formula"] = f
            human.append(f"formula: {f}")
    if args.oracle:
        from . import oracle
        res = None
        if args.relation in ("ta-bisim", "ta-delay-bisim", "ta-obs-bisim"):
            flavor = {"ta-bisim": "strong", "ta-delay-bisim": "delay",
                      "ta-obs-bisim": "observational"}[args.relation]
            res = oracle.region_bisim(A, p, B, q, flavor)
        elif args.relation == "timed-bisim":
            res = oracle.grid_timed_bisim(A, p, B, q)
        data["oracle"] = res
        human.append(f"oracle: {'n/a' if res is None else res}")
    _emit(args, data, "\n".join(human))
    return 0 if verdict.related else 1


def cmd_zonegraph(args) -> int:
    A = load_automaton(args.a)
    p = _state(A, args.a, args.state)
    G = ZoneGraph(A, p)
    data = G.to_dict()
    lines = [f"initial: {data['initial']}"]
    for nd in data["nodes"]:
        lines.append(f"node {nd['id']}: {nd['location']} | {nd['zone']}")
    for e in data["edges"]:
        lines.append(f"{e['from']} -{e['label']}-> {e['to']}")
    _emit(args, data, "\n".join(lines))
    return 0


def _budget(text):
    if text in ("inf", "infinite", "unbounded"):
        return None
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a natural number or 'inf', got {text!r}")
    if v < 0:
        raise argparse.ArgumentTypeError("budget must be non-negative")
    return v


def cmd_game(args) -> int:
    A, p, B, q = _load_pair(args)
    alpha = tuple(s.strip() for s in args.alpha.split(","))
    sides = tuple(s.strip() for s in args.challenger_sides.split(","))
    if args.beta == "either":
        other = GameConfig(args.alternations, args.rounds, alpha, ("B", "<="), sides=sides)
        cfg = GameConfig(args.alternations, args.rounds, alpha, ("A", "<="), other, sides)
    else:
        beta = tuple(s.strip() for s in args.beta.split(",")) if args.beta else None
        cfg = GameConfig(args.alternations, args.rounds, alpha, beta, sides=sides)
    out = play(cfg, pair=Pair(A, p, B, q))
    lines = [f"{cfg.describe()}: {out.winner} wins"]
    if "disjunct" in out.detail:
        lines[0] += f" (disjunct {out.detail['disjunct']})"
    for e in out.trace:
        lines.append(f"  round {e['round']}: {e['side']} {e['move']} / {e['response']}")
    _emit(args, out.to_dict(), "\n".join(lines))
    return 0 if out.defender_wins else 1


def cmd_formula(args) -> int:
    A = load_automaton(args.a)
    B = load_automaton(args.b)
    try:
        phi = synthesize_distinguishing(A, B)
    except NotDistinguishable:
        _emit(args, {"formula": None, "bisimilar": True}, "initial states are timed bisimilar")
        return 0
    text = render_formula(phi)
    _emit(args, {"formula": text, "bisimilar": False}, text)
    return 1


def cmd_hierarchy(args) -> int:
    files = args.files
    if len(files) % 2:
        raise AutomatonError("hierarchy expects pairs of automaton files")
    ok = True
    reports = []
    lines = []
    pairs = []
    for a, b in zip(files[::2], files[1::2]):
        A, B = load_automaton(a), load_automaton(b)
        pairs.append((A, B))
        rep = check_hierarchy(pair=Pair(A, None, B, None))
        d = rep.to_dict()
        d["files"] = [a, b]
        reports.append(d)
        ok &= rep.monotone
        lines.append(f"{a} vs {b}: {'monotone' if rep.monotone else 'VIOLATION'}")
        for k, v in d["verdicts"].items():
            lines.append(f"  {k:20s} {'yes' if v else 'no'}")
        for v in d["violations"]:
            lines.append(f"  violated: {v}")
    data = {"pairs": reports, "monotone": ok}
    if args.games:
        audit = hierarchy_audit(pairs)
        data["game_audit"] = {"checks": len(audit.checks),
                              "violations": [list(map(str, v)) for v in audit.violations],
                              "counterexamples": [list(map(str, c)) for c in audit.counterexamples]}
        ok &= audit.ok
        lines.append(f"game lemma audit: {len(audit.checks)} checks, "
                     f"{len(audit.violations)} violations")
    _emit(args, data, "\n".join(lines))
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="timedrel", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, pair=True):
        p.add_argument("--format", choices=("human", "json", "structured"), default="human",
                       help="'structured' is an alias for 'json'")
        if pair:
            p.add_argument("a", help="first automaton (JSON)")
            p.add_argument("b", help="second automaton (JSON)")
            p.add_argument("--state-a", help="state of A as LOC[:x=v,...] (default: initial)")
            p.add_argument("--state-b", help="state of B as LOC[:x=v,...] (default: initial)")

    p = sub.add_parser("check", help="decide a relation between two automata")
    p.add_argument("--relation", required=True, choices=RELATIONS)
    p.add_argument("--fast-side", choices=("left", "right"), default="left",
                   help="for prebisim: which automaton must be at least as fast")
    p.add_argument("--emit-formula", action="store_true")
    p.add_argument("--emit-trace", action="store_true",
                   help="print the refutation in human output (always present in json)")
    p.add_argument("--oracle", action="store_true", help="also run the brute-force oracle")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("zonegraph", help="dump the zone graph of an automaton")
    p.add_argument("a")
    p.add_argument("--state")
    common(p, pair=False)
    p.set_defaults(func=cmd_zonegraph)

    p = sub.add_parser("game", help="play a configured game")
    p.add_argument("--alpha", default="a/d,a/d",
                   help="challenger,defender move shapes, e.g. a/d,a/d or a/eps,eps.a/eps")
    p.add_argument("--rounds", type=_budget, default=None)
    p.add_argument("--alternations", type=_budget, default=None)
    p.add_argument("--beta", help="delay side condition 'A,<=' or 'B,<=' (needs --alpha a/d1,a/d2), "
                                  "or 'either' for the disjunction of both")
    p.add_argument("--challenger-sides", default="A,B")
    common(p)
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("formula", help="distinguishing formula for two initial states")
    p.add_argument("a")
    p.add_argument("b")
    common(p, pair=False)
    p.set_defaults(func=cmd_formula)

    p = sub.add_parser("hierarchy", help="check the relation hierarchy on pairs of automata")
    p.add_argument("files", nargs="+", help="A1 B1 [A2 B2 ...]")
    p.add_argument("--games", action="store_true", help="also audit the game lemmas")
    common(p, pair=False)
    p.set_defaults(func=cmd_hierarchy)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (AutomatonError, GameConfigError, NoContainingNode, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
