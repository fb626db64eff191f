"""Timed Hennessy-Milner logic with formula clocks.

Concrete syntax::

    tt | ff | phi && psi | phi || psi | <a> phi | [a] phi
    | EE(phi) | AA(phi) | x in (phi) | x op n | n < x < m

``&&`` binds tighter than ``||``; modal prefixes bind tighter than both.

:func:`synthesize_distinguishing` turns the challenger's winning strategy of
the timed bisimulation game into a formula that holds in the first
automaton's initial state and fails in the second's.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .automaton import TAState, TimedAutomaton, common_scale
from .corner import CornerSpace, CornerState, DeltaValue, compress
from .relations import Pair, cp_bisim, select_delay
from .zone_graph import ZoneGraph


class FormulaError(ValueError):
    """Syntax error or unbound formula clock."""

    def __init__(self, msg, pos=None):
        super().__init__(msg if pos is None else f"{msg} at position {pos}")
        self.pos = pos


class NotDistinguishable(ValueError):
    """Raised when the two states are timed bisimilar."""


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class TT:
    pass


@dataclass(frozen=True)
class FF:
    pass


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Diamond:
    action: str
    body: object


@dataclass(frozen=True)
class Box:
    action: str
    body: object


@dataclass(frozen=True)
class Exists:
    """Some delay (``EE``)."""
    body: object


@dataclass(frozen=True)
class Forall:
    """All delays (``AA``)."""
    body: object


@dataclass(frozen=True)
class ClockIn:
    clock: str
    body: object


@dataclass(frozen=True)
class Atom:
    clock: str
    op: str
    const: int


@dataclass(frozen=True)
class Between:
    """``lo < clock < hi``."""
    lo: int
    clock: str
    hi: int


def conj(parts):
    parts = list(parts)
    if not parts:
        return TT()
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts):
    parts = list(parts)
    if not parts:
        return FF()
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


# ---------------------------------------------------------------------------
# rendering


def render_formula(phi, prec: int = 0) -> str:
    if isinstance(phi, TT):
        return "tt"
    if isinstance(phi, FF):
        return "ff"
    if isinstance(phi, Or):
        s = f"{render_formula(phi.left, 1)} || {render_formula(phi.right, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(phi, And):
        s = f"{render_formula(phi.left, 2)} && {render_formula(phi.right, 3)}"
        return f"({s})" if prec > 2 else s
    if isinstance(phi, (Diamond, Box)):
        head = f"<{phi.action}>" if isinstance(phi, Diamond) else f"[{phi.action}]"
        sep = "" if isinstance(phi.body, (Diamond, Box)) else " "
        return head + sep + render_formula(phi.body, 3)
    if isinstance(phi, Exists):
        return f"EE({render_formula(phi.body)})"
    if isinstance(phi, Forall):
        return f"AA({render_formula(phi.body)})"
    if isinstance(phi, ClockIn):
        return f"{phi.clock} in ({render_formula(phi.body)})"
    if isinstance(phi, Atom):
        return f"{phi.clock} {phi.op} {phi.const}"
    if isinstance(phi, Between):
        return f"{phi.lo} < {phi.clock} < {phi.hi}"
    raise TypeError(f"not a formula: {phi!r}")


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(&&|\|\||<=|>=|[<>=()\[\]])|(\d+)|([A-Za-z_][A-Za-z0-9_']*))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            pos += len(text) - pos - len(text[pos:].lstrip())
            raise FormulaError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            out.append(("op", m.group(1), start))
        elif m.group(2):
            out.append(("int", int(m.group(2)), start))
        else:
            out.append(("id", m.group(3), start))
        pos = m.end()
    out.append(("eof", None, len(text)))
    return out


class _Parser:
    def __init__(self, text, require_closed):
        self.toks = _tokenize(text)
        self.i = 0
        self.scope = []
        self.require_closed = require_closed

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, kind=None, value=None):
        t = self.peek()
        if (kind and t[0] != kind) or (value is not None and t[1] != value):
            want = value if value is not None else kind
            raise FormulaError(f"expected {want!r}, found {t[1]!r}", t[2])
        self.i += 1
        return t

    def clock_use(self, name, pos):
        if self.require_closed and name not in self.scope:
            raise FormulaError(f"unbound formula clock {name!r}", pos)

    def expr(self):
        left = self.conj()
        while self.peek()[1] == "||" and self.peek()[0] == "op":
            self.take()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.peek()[1] == "&&" and self.peek()[0] == "op":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self):
        kind, val, pos = self.peek()
        if kind == "op" and val == "<":
            self.take()
            a = self.take("id")[1]
            self.take("op", ">")
            return Diamond(a, self.unary())
        if kind == "op" and val == "[":
            self.take()
            a = self.take("id")[1]
            self.take("op", "]")
            return Box(a, self.unary())
        if kind == "op" and val == "(":
            self.take()
            e = self.expr()
            self.take("op", ")")
            return e
        if kind == "id" and val in ("EE", "AA") and self.peek(1)[1] == "(":
            self.take()
            self.take("op", "(")
            e = self.expr()
            self.take("op", ")")
            return Exists(e) if val == "EE" else Forall(e)
        if kind == "id" and val == "tt":
            self.take()
            return TT()
        if kind == "id" and val == "ff":
            self.take()
            return FF()
        if kind == "id" and self.peek(1)[0] == "id" and self.peek(1)[1] == "in":
            self.take()
            self.take()
            self.take("op", "(")
            self.scope.append(val)
            e = self.expr()
            self.scope.pop()
            self.take("op", ")")
            return ClockIn(val, e)
        if kind == "id" and self.peek(1)[0] == "op" and self.peek(1)[1] in ("<", "<=", "=", ">=", ">"):
            self.take()
            op = self.take()[1]
            c = self.take("int")[1]
            self.clock_use(val, pos)
            return Atom(val, op, c)
        if kind == "int":
            self.take()
            self.take("op", "<")
            name, npos = self.take("id")[1:]
            self.take("op", "<")
            hi = self.take("int")[1]
            self.clock_use(name, npos)
            return Between(val, name, hi)
        raise FormulaError(f"unexpected token {val!r}", pos)


def parse_formula(text: str, require_closed: bool = False):
    p = _Parser(text, require_closed)
    phi = p.expr()
    if p.peek()[0] != "eof":
        raise FormulaError(f"trailing input {p.peek()[1]!r}", p.peek()[2])
    return phi


def _children(phi):
    if isinstance(phi, (And, Or)):
        return (phi.left, phi.right)
    if isinstance(phi, (Diamond, Box, Exists, Forall, ClockIn)):
        return (phi.body,)
    return ()


def free_clocks(phi, bound=frozenset()) -> set[str]:
    if isinstance(phi, (Atom, Between)):
        return set() if phi.clock in bound else {phi.clock}
    if isinstance(phi, ClockIn):
        return free_clocks(phi.body, bound | {phi.clock})
    out = set()
    for c in _children(phi):
        out |= free_clocks(c, bound)
    return out


def is_closed(phi) -> bool:
    return not free_clocks(phi)


def formula_clocks(phi) -> list[str]:
    """Formula clock names in order of first occurrence."""
    out = []

    def walk(f):
        if isinstance(f, ClockIn) and f.clock not in out:
            out.append(f.clock)
        if isinstance(f, (Atom, Between)) and f.clock not in out:
            out.append(f.clock)
        for c in _children(f):
            walk(c)
    walk(phi)
    return out


def max_constant(phi) -> int:
    if isinstance(phi, Atom):
        return phi.const
    if isinstance(phi, Between):
        return max(phi.lo, phi.hi)
    return max((max_constant(c) for c in _children(phi)), default=0)


# ---------------------------------------------------------------------------
# evaluation


@dataclass(frozen=True)
class ExtendedState:
    base: object                   # CornerState or TAState
    assignment: tuple = ()         # ((formula clock, DeltaValue), ...)


_OK = {"<": (-1,), "<=": (-1, 0), "=": (0,), ">=": (0, 1), ">": (1,)}


def _cmp(v, c):
    b, k = v
    if b != c:
        return -1 if b < c else 1
    return (k > 0) - (k < 0)


class _Evaluator:
    """Evaluates formulas on one automaton plus formula clocks, with corner delays."""

    def __init__(self, A, G, names, K):
        self.A = A
        self.space = CornerSpace([G], n_extra=len(names), extra_max=K)
        self.names = {n: i for i, n in enumerate(names)}
        self.L = self.space.L
        self.memo = {}
        self.keep = []

    def delays(self, locs, raw):
        """Delays reaching every integer corner of every clock, plus saturation."""
        space = self.space
        clamps = space.clamps(locs)
        L = self.L
        out = {(0, 0)}
        sat = (0, 0)
        for (b, k), c in zip(raw, clamps):
            if b > c or (b == c and k > 0):
                continue
            k2 = 2 * k
            sat = max(sat, (c + L - b, 0))
            for n in range(-(-b // L) * L, c + L + 1, L):
                for j in (-1, 0, 1):
                    d = (n - b, -k2 + j)
                    if d >= (0, 0):
                        out.add(d)
        out.add(sat)
        return sorted(out)

    def ev(self, phi, locs, raw):
        key = (id(phi), locs, raw)
        r = self.memo.get(key)
        if r is not None:
            return r
        r = self._ev(phi, locs, raw)
        self.memo[key] = r
        return r

    def _ev(self, phi, locs, raw):
        space = self.space
        if isinstance(phi, TT):
            return True
        if isinstance(phi, FF):
            return False
        if isinstance(phi, And):
            return self.ev(phi.left, locs, raw) and self.ev(phi.right, locs, raw)
        if isinstance(phi, Or):
            return self.ev(phi.left, locs, raw) or self.ev(phi.right, locs, raw)
        if isinstance(phi, Atom):
            v = raw[space.n_auto + self.names[phi.clock]]
            return _cmp(v, phi.const * self.L) in _OK[phi.op]
        if isinstance(phi, Between):
            v = raw[space.n_auto + self.names[phi.clock]]
            return _cmp(v, phi.lo * self.L) > 0 and _cmp(v, phi.hi * self.L) < 0
        if isinstance(phi, ClockIn):
            nl, nr = space.reset_extra(locs, raw, self.names[phi.clock])
            return self.ev(phi.body, nl, nr)
        if isinstance(phi, (Diamond, Box)):
            succ = [space.fire(0, locs, raw, e) for e in space.enabled(0, locs, raw)
                    if e.action == phi.action]
            if isinstance(phi, Diamond):
                return any(self.ev(phi.body, *s) for s in succ)
            return all(self.ev(phi.body, *s) for s in succ)
        if isinstance(phi, (Exists, Forall)):
            succ = (space.advance(locs, raw, [d], d) for d in self.delays(locs, raw))
            if isinstance(phi, Exists):
                return any(self.ev(phi.body, *s) for s in succ)
            return all(self.ev(phi.body, *s) for s in succ)
        raise TypeError(f"not a formula: {phi!r}")


def evaluate(phi, A: TimedAutomaton, s=None, G: ZoneGraph | None = None, M=None) -> bool:
    """Truth of a closed formula at ``s`` (a TAState, CornerState or ExtendedState).

    Delay quantifiers range over corner-point delays: every delay that brings
    some automaton or formula clock to an integer, or infinitesimally before
    or after it, plus one delay beyond all max constants.
    """
    if s is None:
        s = A.initial_state()
    if not isinstance(s, ExtendedState):
        s = ExtendedState(s)
    base = s.base
    assignment = dict(s.assignment)
    free = free_clocks(phi) - set(assignment)
    if free:
        raise FormulaError(f"formula has unbound clocks {sorted(free)}")
    names = list(dict.fromkeys(formula_clocks(phi) + list(assignment)))
    K = max([max_constant(phi)] + [int(Fraction(v.base)) + 1 for v in assignment.values()])
    if isinstance(base, TAState):
        corner = CornerState.from_state(base)
    else:
        corner = base
    vals = [Fraction(v.base) for v in corner.values] + [Fraction(v.base) for v in assignment.values()]
    L = 1
    for v in vals:
        L = math.lcm(L, v.denominator)
    if G is None or G.scale % L:
        start = TAState(corner.location, tuple(Fraction(v.base) for v in corner.values))
        G = ZoneGraph(A, start, scale=L if G is None else G.scale * L)
    ev = _Evaluator(A, G, names, K)
    L = ev.L
    raw = [(int(Fraction(v.base) * L), v.delta) for v in corner.values]
    raw += [(0, 0)] * len(names)
    for n, v in assignment.items():
        raw[ev.space.n_auto + ev.names[n]] = (int(Fraction(v.base) * L), v.delta)
    locs = (corner.location,)
    return ev.ev(phi, locs, ev.space.normalize(locs, tuple(raw)))


# ---------------------------------------------------------------------------
# synthesis


def _atom_for(name, v, L, K):
    b, k = v
    n = b // L
    if b == K * L and k > 0:
        return [Atom(name, ">", K)]
    if k == 0:
        return [Atom(name, "=", n)]
    if k > 0:
        return [Between(n, name, n + 1)]
    return [Between(n - 1, name, n)]


def _negate_atom(a):
    if isinstance(a, Between):
        return [Atom(a.clock, "<=", a.lo), Atom(a.clock, ">=", a.hi)]
    if a.op == "=":
        return [Atom(a.clock, "<", a.const), Atom(a.clock, ">", a.const)]
    flip = {"<": ">=", "<=": ">", ">": "<=", ">=": "<"}
    return [Atom(a.clock, flip[a.op], a.const)]


class _Synth:
    def __init__(self, pair: Pair, arena):
        self.pair = pair
        self.arena = arena
        self.game_space = pair.space
        depth = arena.rank[0] + 1
        self.K = max(pair.GA.maxes.global_max(), pair.GB.maxes.global_max())
        self.space = CornerSpace([pair.GA, pair.GB], n_extra=depth, extra_max=self.K)
        self.counter = 0
        self.nA = pair.GA.nclocks

    def fresh(self):
        self.counter += 1
        return f"x{self.counter}"

    def project(self, locs, raw):
        game = self.game_space
        pos = (locs, game.normalize(locs, raw[:self.space.n_auto]))
        i = self.arena.index.get(pos)
        if i is None:
            raise AssertionError("synthesis left the game arena")
        return i

    def psi(self, raw, eta):
        live = sorted(set(eta))
        atoms = []
        for slot in live:
            name = self.slot_names[slot]
            atoms += _atom_for(name, raw[self.space.n_auto + slot], self.space.L, self.K)
        return atoms

    def run(self, locs, raw, eta, used):
        """Formula for the extended position; ``eta`` maps automaton clocks to slots."""
        space = self.space
        i = self.project(locs, raw)
        m = self.arena.best_move(i)
        mv, resps = self.arena.moves[i][m]
        k = 0 if mv["side"] == "A" else 1
        if mv["kind"] == "action":
            e = mv["edge"]
            branches = []
            for resp, _ in resps:
                e2 = resp["edge"]
                resets = {(k, c) for c in e.resets} | {(1 - k, c) for c in e2.resets}
                nl, nr = space.fire(k, locs, raw, e)
                if resets:
                    slot = used
                    name = self.fresh()
                    self.slot_names[slot] = name
                    nl, nr = space.fire(1 - k, nl, nr, e2, extra_reset=(slot,))
                    eta2 = list(eta)
                    for side, c in resets:
                        G = self.pair.GA if side == 0 else self.pair.GB
                        eta2[(0 if side == 0 else self.nA) + G.automaton.clock_index[c]] = slot
                    sub = ClockIn(name, self.run(nl, nr, tuple(eta2), used + 1))
                else:
                    nl, nr = space.fire(1 - k, nl, nr, e2)
                    sub = self.run(nl, nr, eta, used)
                branches.append(sub)
            if k == 0:
                return Diamond(e.action, conj(branches) if branches else TT())
            return Box(e.action, disj(branches) if branches else FF())
        opts = space.delay_options(k, locs, raw)
        d = select_delay(opts, mv["cp"], mv["target"])
        nl, nr = space.advance(locs, raw, [d, d])
        atoms = self.psi(nr, eta)
        sub = self.run(nl, nr, eta, used)
        if k == 0:
            return Exists(conj(atoms + [sub]))
        return Forall(disj([x for a in atoms for x in _negate_atom(a)] + [sub]))


def synthesize_distinguishing(A: TimedAutomaton, B: TimedAutomaton, *, check: bool = True):
    """A closed formula true in A's initial state and false in B's.

    Raises :class:`NotDistinguishable` if the initial states are timed bisimilar.
    """
    pair = Pair(A, None, B, None)
    verdict = cp_bisim(pair=pair)
    if verdict.related:
        raise NotDistinguishable("the initial states are timed bisimilar")
    syn = _Synth(pair, verdict.arena)
    syn.slot_names = {0: syn.fresh()}
    locs, raw = syn.space.start([pair.p, pair.q], extra=[(0, 0)] * syn.space.n_extra)
    eta = tuple([0] * syn.space.n_auto)
    phi = ClockIn("x1", syn.run(locs, raw, eta, 1))
    if check:
        if not evaluate(phi, A, pair.p, pair.GA) or evaluate(phi, B, pair.q, pair.GB):
            raise AssertionError(f"synthesised formula does not distinguish: {render_formula(phi)}")
    return phi
