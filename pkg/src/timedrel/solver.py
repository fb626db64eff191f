"""Explicit-arena solver for challenger/defender games.

An arena is explored from an initial position with a move function
``moves(pos) -> [(move, [(response, pos'), ...]), ...]``.  The challenger
wins from a position if some move has every response leading to a
challenger-winning position (a move with no responses wins at once).  The
defender wins everywhere else, which is the greatest fixpoint of the
corresponding simulation/bisimulation clauses.

Challenger-winning positions get a *rank*: the number of rounds the
challenger needs.  Strategies pick, in enumeration order, the first move
realising the rank, so refutations are deterministic and shortest.
"""

from __future__ import annotations

from collections import deque


class Arena:
    def __init__(self, initial, moves, limit: int | None = None):
        self.positions = [initial]
        self.index = {initial: 0}
        self.moves = []          # per position: list of (move, [(response, pos_id)])
        i = 0
        while i < len(self.positions):
            pos = self.positions[i]
            rec = []
            for mv, resps in moves(pos):
                ids = []
                for r, p2 in resps:
                    j = self.index.get(p2)
                    if j is None:
                        j = len(self.positions)
                        self.index[p2] = j
                        self.positions.append(p2)
                    ids.append((r, j))
                rec.append((mv, ids))
            self.moves.append(rec)
            i += 1
            if limit is not None and len(self.positions) > limit:
                raise RuntimeError(f"arena exceeds {limit} positions")
        self._solve()

    def _solve(self):
        rank = {}
        count = {}
        rev = {}
        queue = deque()
        for i, rec in enumerate(self.moves):
            for m, (_, ids) in enumerate(rec):
                count[(i, m)] = len(ids)
                for _, j in ids:
                    rev.setdefault(j, []).append((i, m))
                if not ids and i not in rank:
                    rank[i] = 1
                    queue.append(i)
        while queue:
            j = queue.popleft()
            for key in rev.get(j, ()):
                count[key] -= 1
                if count[key] == 0:
                    i = key[0]
                    if i not in rank:
                        rank[i] = rank[j] + 1
                        queue.append(i)
        self.rank = rank

    def challenger_wins(self, i: int = 0) -> bool:
        return i in self.rank

    def best_move(self, i: int):
        """Index of the first move (enumeration order) realising ``rank[i]``."""
        r = self.rank[i]
        rank = self.rank
        for m, (_, ids) in enumerate(self.moves[i]):
            if all(j in rank for _, j in ids):
                worst = max((rank[j] for _, j in ids), default=0)
                if worst + 1 == r:
                    return m
        raise AssertionError("inconsistent ranks")

    def defender_positions(self) -> list[int]:
        return [i for i in range(len(self.positions)) if i not in self.rank]

    def defender_reply(self, i: int, m: int):
        """First response to move ``m`` staying outside the challenger's region."""
        for r, j in self.moves[i][m][1]:
            if j not in self.rank:
                return r, j
        return None

    def principal_variation(self, i: int = 0):
        """Challenger-optimal play: list of (pos, move, response or None, next pos)."""
        out = []
        seen = set()
        while i in self.rank and i not in seen:
            seen.add(i)
            m = self.best_move(i)
            mv, ids = self.moves[i][m]
            if not ids:
                out.append((i, mv, None, None))
                break
            # follow the most resilient defender answer
            r, j = max(ids, key=lambda t: self.rank[t[1]])
            out.append((i, mv, r, j))
            i = j
        return out
