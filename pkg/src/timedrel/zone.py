"""Zones as canonical difference-bound matrices.

Clock index 0 is the reference clock; automaton clocks are 1..n-1.  All
constants are integers -- rational start states are handled by scaling every
constant by a common factor (see ``ZoneGraph.scale``).

Bounds use the encoding of :mod:`timedrel._dbm_py`: ``(c, <=) -> 2c+1`` and
``(c, <) -> 2c``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import _kernel as K

log = logging.getLogger(__name__)

INF = K.INF
LE_ZERO = K.LE_ZERO


# ---------------------------------------------------------------------------
# bounds

def bound(value: int, strict: bool) -> int:
    return 2 * value + (0 if strict else 1)


def bound_value(b: int) -> int:
    return b >> 1


def bound_strict(b: int) -> bool:
    return not (b & 1)


def negate(b: int) -> int:
    """Encoded bound of the complement: not(x - y <= c) is y - x < -c."""
    return 1 - b


@dataclass(frozen=True)
class Bound:
    """Decoded bound, mostly for display and tests."""
    value: int | None  # None means +infinity
    strict: bool

    @classmethod
    def decode(cls, b: int) -> "Bound":
        if b == INF:
            return cls(None, True)
        return cls(bound_value(b), bound_strict(b))

    def encode(self) -> int:
        if self.value is None:
            return INF
        return bound(self.value, self.strict)


class DimensionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# zone

class Zone:
    """An immutable zone; ``m`` is the canonical matrix or ``None`` if empty."""

    __slots__ = ("n", "m", "_hash")

    def __init__(self, n: int, m):
        self.n = n
        self.m = m
        self._hash = None

    # constructors -------------------------------------------------------
    @classmethod
    def universe(cls, nclocks: int) -> "Zone":
        n = nclocks + 1
        m = [INF] * (n * n)
        for j in range(n):
            m[j] = LE_ZERO          # 0 - x_j <= 0
        for i in range(n):
            m[i * n + i] = LE_ZERO
        return cls(n, tuple(m))

    @classmethod
    def empty(cls, nclocks: int) -> "Zone":
        return cls(nclocks + 1, None)

    @classmethod
    def point(cls, values: Sequence[int]) -> "Zone":
        """The singleton zone of an integer (already scaled) valuation."""
        n = len(values) + 1
        vals = [0] + list(values)
        m = tuple(bound(vals[i] - vals[j], False) for i in range(n) for j in range(n))
        return cls(n, m)

    @classmethod
    def from_constraints(cls, nclocks: int, cons: Iterable[tuple[int, int, int]]) -> "Zone":
        """Build from ``(i, j, encoded_bound)`` triples meaning x_i - x_j <= b."""
        n = nclocks + 1
        z = cls.universe(nclocks)
        m = list(z.m)
        for i, j, b in cons:
            if b < m[i * n + j]:
                m[i * n + j] = b
        return cls(n, K.close(m, n))

    # basics ---------------------------------------------------------------
    @property
    def nclocks(self) -> int:
        return self.n - 1

    def is_empty(self) -> bool:
        return self.m is None

    def __bool__(self):  # non-empty zones are truthy
        return self.m is not None

    def __eq__(self, other):
        return isinstance(other, Zone) and self.n == other.n and self.m == other.m

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.m))
        return self._hash

    def __lt__(self, other):  # deterministic ordering
        return (self.m or ()) < (other.m or ())

    def __repr__(self):
        return f"Zone({self.render()})"

    def at(self, i: int, j: int) -> int:
        return self.m[i * self.n + j]

    def _check(self, other: "Zone"):
        if self.n != other.n:
            raise DimensionError(f"zone dimensions differ: {self.n} vs {other.n}")

    # set operations -------------------------------------------------------
    def intersect(self, other: "Zone") -> "Zone":
        self._check(other)
        if self.m is None or other.m is None:
            return Zone(self.n, None)
        return Zone(self.n, K.intersect(self.m, other.m, self.n))

    def includes(self, other: "Zone") -> bool:
        """True iff ``other`` is a subset of ``self``."""
        self._check(other)
        if other.m is None:
            return True
        if self.m is None:
            return False
        return K.includes(self.m, other.m)

    def contains(self, values: Sequence) -> bool:
        """Membership of a (scaled) valuation; values may be ints or Fractions."""
        if self.m is None:
            return False
        n = self.n
        vals = [0] + list(values)
        for i in range(n):
            for j in range(n):
                b = self.m[i * n + j]
                if i == j or b == INF:
                    continue
                diff = vals[i] - vals[j]
                c = bound_value(b)
                if diff > c or (diff == c and bound_strict(b)):
                    return False
        return True

    def constrain(self, i: int, j: int, b: int) -> "Zone":
        if self.m is None:
            return self
        return Zone(self.n, K.constrain(self.m, self.n, i, j, b))

    # timed operations -------------------------------------------------------
    def up(self) -> "Zone":
        if self.m is None:
            return self
        return Zone(self.n, K.up(self.m, self.n))

    def down(self) -> "Zone":
        if self.m is None:
            return self
        return Zone(self.n, K.down(self.m, self.n))

    def reset(self, clocks: Iterable[int]) -> "Zone":
        clocks = tuple(clocks)
        if self.m is None or not clocks:
            return self
        return Zone(self.n, K.reset(self.m, self.n, clocks))

    def free(self, clocks: Iterable[int]) -> "Zone":
        clocks = tuple(clocks)
        if self.m is None or not clocks:
            return self
        return Zone(self.n, K.free(self.m, self.n, clocks))

    def extrapolate(self, maxes: Sequence[int]) -> "Zone":
        """Location-dependent max-constant widening (``maxes[0]`` is ignored)."""
        if self.m is None:
            return self
        return Zone(self.n, K.extrapolate(self.m, self.n, tuple(maxes)))

    # structure --------------------------------------------------------------
    def constraints(self):
        """Non-trivial finite entries as ``(i, j, b)`` triples."""
        n = self.n
        out = []
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                b = self.m[i * n + j]
                if b == INF or (i == 0 and b == LE_ZERO):
                    continue
                out.append((i, j, b))
        return out

    def minimal_constraints(self):
        """A non-redundant subset of :meth:`constraints` defining the same zone."""
        cons = self.constraints()
        keep = list(cons)
        for c in cons:
            rest = [k for k in keep if k != c]
            z = Zone.from_constraints(self.nclocks, rest)
            i, j, b = c
            if z.m is not None and z.at(i, j) <= b:
                keep = rest
        return keep

    def subtract(self, other: "Zone") -> list["Zone"]:
        """Convex, pairwise-disjoint pieces whose union is ``self \\ other``."""
        self._check(other)
        if self.m is None:
            return []
        inter = self.intersect(other)
        if inter.m is None:
            return [self]
        if other.includes(self):
            return []
        pieces = []
        rest = self
        for i, j, b in other.minimal_constraints():
            if rest.at(i, j) <= b:
                continue
            piece = rest.constrain(j, i, negate(b))
            if piece.m is not None:
                pieces.append(piece)
            rest = rest.constrain(i, j, b)
            if rest.m is None:
                break
        return pieces

    def hull(self, other: "Zone") -> "Zone":
        self._check(other)
        if self.m is None:
            return other
        if other.m is None:
            return self
        return Zone(self.n, tuple(a if a > b else b for a, b in zip(self.m, other.m)))

    # display ----------------------------------------------------------------
    def render(self, names: Sequence[str] | None = None, scale: int = 1) -> str:
        """Conjunction string such as ``0<=x<=2 & x-y<1``."""
        if self.m is None:
            return "false"
        n = self.n
        if names is None:
            names = [f"x{i}" for i in range(1, n)]

        def num(c):
            q = Fraction(c, scale)
            return str(q.numerator) if q.denominator == 1 else str(q)

        parts = []
        for i in range(1, n):
            lo = self.m[i]            # -x_i <= lo
            hi = self.m[i * n]        # x_i <= hi
            name = names[i - 1]
            if hi != INF and lo != INF and -bound_value(lo) == bound_value(hi) \
                    and not bound_strict(lo) and not bound_strict(hi):
                parts.append(f"{name}={num(bound_value(hi))}")
                continue
            s = ""
            if lo != INF:
                s += f"{num(-bound_value(lo))}{'<' if bound_strict(lo) else '<='}"
            s += name
            if hi != INF:
                s += f"{'<' if bound_strict(hi) else '<='}{num(bound_value(hi))}"
            parts.append(s)
        for i in range(1, n):
            for j in range(1, n):
                if i == j:
                    continue
                b = self.m[i * n + j]
                if b == INF:
                    continue
                # skip diagonals implied by the absolute bounds
                hi_i = self.m[i * n]
                lo_j = self.m[j]
                if hi_i != INF and lo_j != INF and _add(hi_i, lo_j) <= b:
                    continue
                rb = self.m[j * n + i]
                if rb != INF and -bound_value(rb) == bound_value(b) and not bound_strict(b) \
                        and not bound_strict(rb):
                    if i < j:
                        parts.append(f"{names[i-1]}-{names[j-1]}={num(bound_value(b))}")
                    continue
                op = "<" if bound_strict(b) else "<="
                parts.append(f"{names[i-1]}-{names[j-1]}{op}{num(bound_value(b))}")
        return " & ".join(parts) if parts else "true"


def _add(a, b):
    if a == INF or b == INF:
        return INF
    return a + b - ((a | b) & 1)


# ---------------------------------------------------------------------------
# guards

OPS = ("<", "<=", "=", ">=", ">")


def atom_constraints(clock: int, op: str, c: int) -> list[tuple[int, int, int]]:
    """DBM entries for ``x_clock op c`` (c already scaled)."""
    if op == "<":
        return [(clock, 0, bound(c, True))]
    if op == "<=":
        return [(clock, 0, bound(c, False))]
    if op == ">":
        return [(0, clock, bound(-c, True))]
    if op == ">=":
        return [(0, clock, bound(-c, False))]
    if op == "=":
        return [(clock, 0, bound(c, False)), (0, clock, bound(-c, False))]
    raise ValueError(f"unknown comparison {op!r}")


def atom_cells(clock: int, op: str, c: int) -> list[list[tuple[int, int, int]]]:
    """The uniform cells an atomic guard splits a zone into."""
    if op == "=":
        return [[(clock, 0, bound(c, True))],
                [(clock, 0, bound(c, False)), (0, clock, bound(-c, False))],
                [(0, clock, bound(-c, True))]]
    pos = atom_constraints(clock, op, c)
    (i, j, b), = pos
    return [pos, [(j, i, negate(b))]]


def guard_zone(nclocks: int, atoms: Iterable[tuple[int, str, int]]) -> Zone:
    cons = []
    for clock, op, c in atoms:
        cons.extend(atom_constraints(clock, op, c))
    return Zone.from_constraints(nclocks, cons)


def _apply(z: Zone, cons) -> Zone:
    for i, j, b in cons:
        z = z.constrain(i, j, b)
        if z.m is None:
            break
    return z


# ---------------------------------------------------------------------------
# functional API

def canonicalize(z: Zone) -> Zone:
    if z.m is None:
        return z
    return Zone(z.n, K.close(z.m, z.n))


def up(z: Zone) -> Zone:
    return z.up()


def intersect(z1: Zone, z2: Zone) -> Zone:
    return z1.intersect(z2)


def includes(z1: Zone, z2: Zone) -> bool:
    return z1.includes(z2)


def is_empty(z: Zone) -> bool:
    return z.m is None


def contains(z: Zone, values) -> bool:
    return z.contains(values)


def reset(z: Zone, clocks) -> Zone:
    return z.reset(clocks)


def extrapolate(z: Zone, maxes) -> Zone:
    return z.extrapolate(maxes)


def split_by_guard(z: Zone, atoms: Iterable[tuple[int, str, int]]) -> list[Zone]:
    """Canonical decomposition of ``z`` w.r.t. every atomic constraint."""
    if z.m is None:
        return []
    pieces = [z]
    for clock, op, c in atoms:
        nxt = []
        for p in pieces:
            for cell in atom_cells(clock, op, c):
                q = _apply(p, cell)
                if q.m is not None:
                    nxt.append(q)
        pieces = nxt
    return sorted(set(pieces))


def delay_preds(z: Zone) -> Zone:
    return z.down()


def edge_preds(z: Zone, guard: Zone, resets: Sequence[int]) -> Zone:
    """Valuations satisfying ``guard`` whose reset image lands in ``z``."""
    if z.m is None:
        return z
    target = z
    for c in resets:
        target = target.constrain(c, 0, LE_ZERO).constrain(0, c, LE_ZERO)
        if target.m is None:
            return target
    return target.free(resets).intersect(guard)


def split_prestable(z1: Zone, p: Zone) -> list[Zone]:
    """Split ``z1`` into ``z1 & p`` plus convex pieces of ``z1 \\ p``."""
    inside = z1.intersect(p)
    if inside.m is None or p.includes(z1):
        return [z1]
    rest = z1.subtract(p)
    if len(rest) > 1:
        log.debug("non-convex remainder split into %d cells", len(rest))
    return [inside] + rest


def convex_merge(z1: Zone, z2: Zone) -> Zone | None:
    """The hull of ``z1`` and ``z2`` if it equals their union, else ``None``."""
    h = z1.hull(z2)
    for piece in h.subtract(z1):
        if piece.subtract(z2):
            return None
    return h
