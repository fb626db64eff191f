"""The parametric game template ``n-Γ_k^{α,β}``.

``n`` bounds the number of alternations (the challenger switching
automaton), ``k`` the number of rounds, ``α`` fixes the shape of challenger
and defender moves and ``β`` optionally forces one automaton's delays to be
no longer than the other's.  Games are solved by Kleene iteration of the
challenger's winning region over the finite arena of
``(pair, rounds left, alternations left, last side)`` positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .relations import Pair, RelationKind

TIMED_ALPHAS = {("a/d", "a/d"), ("a/d1", "a/d2")}
EPS_ALPHAS = {("a/eps", "a/eps"): "strong", ("a/eps", "eps.a/eps"): "delay",
              ("a/eps", "eps.a.eps/eps"): "observational"}


class GameConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GameConfig:
    alternations: int | None = None     # None = unbounded
    rounds: int | None = None           # None = unbounded
    alpha: tuple = ("a/d", "a/d")
    beta: tuple | None = None           # e.g. ("A", "<=")
    disjunction: "GameConfig | None" = None
    sides: tuple = ("A", "B")           # automata the challenger may play on

    def validate(self):
        if self.alpha not in TIMED_ALPHAS and self.alpha not in EPS_ALPHAS:
            raise GameConfigError(f"unsupported alpha {self.alpha}")
        if (self.alpha == ("a/d1", "a/d2")) != (self.beta is not None):
            raise GameConfigError("free delays a/d1,a/d2 need a beta side condition and vice versa")
        if self.beta is not None and (self.beta[0] not in ("A", "B") or self.beta[1] != "<="):
            raise GameConfigError(f"unsupported beta {self.beta}")
        if self.rounds is not None:
            if self.rounds < 0:
                raise GameConfigError("rounds must be non-negative")
            if self.alternations is not None and self.rounds > 0 and self.alternations > self.rounds - 1:
                raise GameConfigError("alternations must be at most rounds-1")
        if self.alternations is not None and self.alternations < 0:
            raise GameConfigError("alternations must be non-negative")
        if not self.sides or any(s not in ("A", "B") for s in self.sides):
            raise GameConfigError(f"bad challenger sides {self.sides}")
        if self.disjunction is not None:
            self.disjunction.validate()

    def describe(self) -> str:
        n = "inf" if self.alternations is None else self.alternations
        k = "inf" if self.rounds is None else self.rounds
        s = f"{n}-G_{k}<{self.alpha[0]},{self.alpha[1]}>"
        if self.beta:
            s += f"[Z_{self.beta[0]},{self.beta[1]}]"
        if self.sides != ("A", "B"):
            s += f" challenger on {','.join(self.sides)}"
        if self.disjunction:
            s += " or " + self.disjunction.describe()
        return s


@dataclass
class GameOutcome:
    winner: str                       # 'challenger' | 'defender'
    trace: list = field(default_factory=list)
    alternation_count: int = 0
    detail: dict = field(default_factory=dict)

    @property
    def defender_wins(self) -> bool:
        return self.winner == "defender"

    def to_dict(self):
        return {"winner": self.winner, "alternation_count": self.alternation_count,
                "trace": self.trace, **self.detail}


# ---------------------------------------------------------------------------
# base move generators: yield (side, label, [(label, base position), ...])


def _timed_challenges(space, locs, raw, k):
    opts = space.delay_options(k, locs, raw)
    seen = set()
    ordered = []
    for kind, d in [("max", opts["max"])] + [("enter", x) for _, x in opts["enter"]] \
            + [("f", x) for _, x in opts["f"]]:
        if d > (0, 0) and d not in seen:
            seen.add(d)
            ordered.append((d, kind))
    ordered.sort()
    return ordered


def _timed_moves(space, pos, k, fast):
    """Moves of the challenger on automaton ``k``; ``fast`` is the β side or None."""
    locs, raw = pos
    o = 1 - k
    out = []
    for e in space.enabled(k, locs, raw):
        mlocs, mraw = space.fire(k, locs, raw, e)
        resps = []
        for e2 in space.enabled(o, mlocs, mraw):
            if e2.action == e.action:
                resps.append((f"{e2.action}", space.fire(o, mlocs, mraw, e2)))
        out.append((f"{e.action}", resps))
    for d, kind in _timed_challenges(space, locs, raw, k):
        label = f"delay {space.delay_value(d).render()}"
        if fast is None:
            both = [d, d]
            out.append((label, [(label, space.advance(locs, raw, both))]))
            continue
        other = space.delay_options(o, locs, raw)
        points = [x for _, x in other["end"]]
        entries = [x for _, x in other["enter"]]
        if k == fast:
            extra = [] if kind == "max" else [x for x in points + entries if x >= d]
        else:
            pool = points if kind == "max" else points + entries
            extra = [x for x in pool if (0, 0) <= x <= d]
        resps = []
        for d2 in sorted(set(extra) | {d}):
            per = [None, None]
            per[k], per[o] = d, d2
            resps.append((f"delay {space.delay_value(d2).render()}", space.advance(locs, raw, per)))
        out.append((label, resps))
    return out


def _closure_answers(G, m, a, shape):
    starts = [m] if shape == "strong" else G.delay_chain(m)
    out = []
    for s in starts:
        for act, t, _ in G.action_succ(s):
            if act == a:
                if shape == "observational":
                    out.extend(G.delay_chain(t))
                else:
                    out.append(t)
    return sorted(set(out))


def _eps_moves(graphs, pos, k, shape):
    o = 1 - k
    n, m = pos[k], pos[o]
    out = []
    for a, t in sorted({(a, t) for a, t, _ in graphs[k].action_succ(n)}):
        resps = []
        for t2 in _closure_answers(graphs[o], m, a, shape):
            nxt = [None, None]
            nxt[k], nxt[o] = t, t2
            resps.append((f"{a} -> node {t2}", tuple(nxt)))
        out.append((f"{a} -> node {t}", resps))
    for t in graphs[k].delay_chain(n)[1:]:
        resps = []
        for t2 in graphs[o].delay_chain(m):
            nxt = [None, None]
            nxt[k], nxt[o] = t, t2
            resps.append((f"eps -> node {t2}", tuple(nxt)))
        out.append((f"eps -> node {t}", resps))
    return out


# ---------------------------------------------------------------------------
# solving


class _Game:
    def __init__(self, cfg: GameConfig, pair: Pair):
        self.cfg = cfg
        self.pair = pair
        if cfg.alpha in EPS_ALPHAS:
            shape = EPS_ALPHAS[cfg.alpha]
            graphs = (pair.GA, pair.GB)
            self.base_start = (pair.GA.initial, pair.GB.initial)
            self.base_moves = lambda pos, k: _eps_moves(graphs, pos, k, shape)
        else:
            fast = None if cfg.beta is None else "AB".index(cfg.beta[0])
            space = pair.space
            self.base_start = pair.start()
            self.base_moves = lambda pos, k: _timed_moves(space, pos, k, fast)
        self.sides = tuple("AB".index(s) for s in cfg.sides)
        self.start = (self.base_start, cfg.rounds, cfg.alternations, None)
        self._explore()
        self._solve()

    def _moves(self, position):
        base, rounds, alts, last = position
        if rounds == 0:
            return []
        out = []
        for k in self.sides:
            a2 = alts
            if last is not None and k != last:
                if alts == 0:
                    continue
                a2 = None if alts is None else alts - 1
            r2 = None if rounds is None else rounds - 1
            for label, resps in self.base_moves(base, k):
                out.append(((k, label), [(rl, (b2, r2, a2, k)) for rl, b2 in resps]))
        return out

    def _explore(self):
        self.index = {self.start: 0}
        self.positions = [self.start]
        self.table = []
        i = 0
        while i < len(self.positions):
            rec = []
            for mv, resps in self._moves(self.positions[i]):
                ids = []
                for rl, p2 in resps:
                    j = self.index.get(p2)
                    if j is None:
                        j = self.index[p2] = len(self.positions)
                        self.positions.append(p2)
                    ids.append((rl, j))
                rec.append((mv, ids))
            self.table.append(rec)
            i += 1

    def _solve(self):
        """Kleene iteration: ``rank[i] = t`` if the challenger wins within ``t`` rounds."""
        rank = {}
        t = 0
        while True:
            t += 1
            new = [i for i, rec in enumerate(self.table) if i not in rank
                   and any(all(j in rank for _, j in ids) for _, ids in rec)]
            if not new:
                break
            for i in new:
                rank[i] = t
        self.rank = rank

    def challenger_wins(self) -> bool:
        return 0 in self.rank

    def _render_move(self, side, label):
        return f"{'AB'[side]}: {label}"

    def trace(self):
        out = []
        i = 0
        rnd = 1
        seen = set()
        if self.challenger_wins():
            while i in self.rank:
                r = self.rank[i]
                for (side, label), ids in self.table[i]:
                    if all(j in self.rank and self.rank[j] < r for _, j in ids):
                        break
                if not ids:
                    out.append({"round": rnd, "side": "AB"[side], "move": label, "response": "FAIL"})
                    break
                rl, j = max(ids, key=lambda t: self.rank[t[1]])
                out.append({"round": rnd, "side": "AB"[side], "move": label, "response": rl})
                i = j
                rnd += 1
        else:
            limit = self.cfg.rounds if self.cfg.rounds is not None else 6
            while rnd <= limit and i not in seen and self.table[i]:
                seen.add(i)
                (side, label), ids = self.table[i][0]
                reply = next(((rl, j) for rl, j in ids if j not in self.rank), None)
                if reply is None:
                    break
                out.append({"round": rnd, "side": "AB"[side], "move": label, "response": reply[0]})
                i = reply[1]
                rnd += 1
        return out


def _alternations(trace) -> int:
    sides = [e["side"] for e in trace]
    return sum(1 for a, b in zip(sides, sides[1:]) if a != b)


def play(cfg: GameConfig, A=None, p=None, B=None, q=None, *, pair: Pair | None = None) -> GameOutcome:
    """Winner of the configured game under optimal play, with a trace."""
    cfg.validate()
    if pair is None:
        pair = Pair(A, p, B, q)
    game = _Game(cfg, pair)
    trace = game.trace()
    if game.challenger_wins() and cfg.disjunction is not None:
        alt = play(cfg.disjunction, pair=pair)
        alt.detail = {**alt.detail, "disjunct": 2}
        return alt
    winner = "challenger" if game.challenger_wins() else "defender"
    detail = {"game": cfg.describe(), "arena_size": len(game.positions)}
    if cfg.disjunction is not None:
        detail["disjunct"] = 1
    return GameOutcome(winner, trace, _alternations(trace), detail)


def correspondence(kind, fast_side: str | None = "left") -> GameConfig:
    """The game whose defender wins exactly when the relation holds.

    For prebisim, ``fast_side`` picks the β side: 'left' (A no slower than
    B), 'right', or ``None`` for the disjunction of both.
    """
    kind = RelationKind(kind)
    K = RelationKind
    timed = ("a/d", "a/d")
    table = {
        K.TIMED_BISIM: GameConfig(None, None, timed),
        K.TIMED_SIM: GameConfig(0, None, timed, sides=("A",)),
        K.TIMED_SIM_EQUIV: GameConfig(0, None, timed),
        K.TA_BISIM: GameConfig(None, None, ("a/eps", "a/eps")),
        K.TA_DELAY_BISIM: GameConfig(None, None, ("a/eps", "eps.a/eps")),
        K.TA_OBS_BISIM: GameConfig(None, None, ("a/eps", "eps.a.eps/eps")),
        K.TA_SIM_EQUIV: GameConfig(0, None, ("a/eps", "a/eps")),
        K.TA_DELAY_SIM_EQUIV: GameConfig(0, None, ("a/eps", "eps.a/eps")),
        K.TA_OBS_SIM_EQUIV: GameConfig(0, None, ("a/eps", "eps.a.eps/eps")),
    }
    if kind in table:
        return table[kind]
    left = GameConfig(None, None, ("a/d1", "a/d2"), beta=("A", "<="))
    right = GameConfig(None, None, ("a/d1", "a/d2"), beta=("B", "<="))
    if fast_side == "left":
        return left
    if fast_side == "right":
        return right
    if fast_side is None:
        return GameConfig(None, None, ("a/d1", "a/d2"), beta=("A", "<="), disjunction=right)
    raise ValueError(f"bad fast side {fast_side!r}")


# ---------------------------------------------------------------------------
# lemma audit


@dataclass
class AuditReport:
    checks: list = field(default_factory=list)      # (arrow, instance, premise, conclusion)
    counterexamples: list = field(default_factory=list)  # non-arrows observed

    @property
    def violations(self):
        return [c for c in self.checks if c[2] and not c[3]]

    @property
    def ok(self) -> bool:
        return not self.violations


def _arrows():
    """(name, stronger config, weaker config) for the budget, delay and ε lemmas."""
    out = []
    alphas = [("a/d", "a/d"), ("a/eps", "a/eps")]
    for al in alphas:
        tag = f"<{al[0]},{al[1]}>"
        out.append((f"G_inf{tag} -> 2-G_inf", GameConfig(None, None, al), GameConfig(2, None, al)))
        for n in (2, 1):
            out.append((f"{n}-G_inf{tag} -> {n-1}-G_inf",
                        GameConfig(n, None, al), GameConfig(n - 1, None, al)))
        out.append((f"G_inf{tag} -> G_3", GameConfig(None, None, al), GameConfig(None, 3, al)))
        for k in (3, 2):
            out.append((f"G_{k}{tag} -> G_{k-1}", GameConfig(None, k, al), GameConfig(None, k - 1, al)))
        out.append((f"1-G_inf{tag} -> 1-G_3", GameConfig(1, None, al), GameConfig(1, 3, al)))
    exact = GameConfig(None, None, ("a/d", "a/d"))
    out.append(("exact delays -> prebisim (Z_A,<=)", exact, correspondence("prebisim", "left")))
    out.append(("exact delays -> prebisim disjunction", exact, correspondence("prebisim", None)))
    for n in (None, 0):
        chain = [GameConfig(n, None, ("a/d", "a/d")), GameConfig(n, None, ("a/eps", "a/eps")),
                 GameConfig(n, None, ("a/eps", "eps.a/eps")),
                 GameConfig(n, None, ("a/eps", "eps.a.eps/eps"))]
        for g1, g2 in zip(chain, chain[1:]):
            out.append((f"{g1.describe()} -> {g2.describe()}", g1, g2))
    return out


def hierarchy_audit(instances) -> AuditReport:
    """Check every lemma arrow on each ``(A, p, B, q)`` or ``(A, B)`` instance."""
    report = AuditReport()
    arrows = _arrows()
    for idx, inst in enumerate(instances):
        if len(inst) == 2:
            A, B = inst
            p = q = None
        else:
            A, p, B, q = inst
        pair = Pair(A, p, B, q)
        cache = {}

        def wins(cfg):
            if cfg not in cache:
                cache[cfg] = play(cfg, pair=pair).defender_wins
            return cache[cfg]

        for name, g1, g2 in arrows:
            prem = wins(g1)
            concl = wins(g2) if prem else None
            report.checks.append((name, idx, prem, concl if prem else True))
        # a non-arrow: delay-bisim game won while the strong one is lost
        if wins(GameConfig(None, None, ("a/eps", "eps.a/eps"))) and not wins(GameConfig(None, None, ("a/eps", "a/eps"))):
            report.counterexamples.append(("<a/eps,eps.a/eps> does not imply <a/eps,a/eps>", idx))
    return report
