"""Pure-Python difference-bound-matrix kernels.

A DBM of dimension ``n`` is a flat row-major tuple of ``n*n`` encoded
bounds.  A bound ``(c, <=)`` is stored as ``2c+1`` and ``(c, <)`` as ``2c``,
so the natural integer order is the bound order.  ``INF`` marks an absent
constraint.  Every function that can produce an empty zone returns ``None``
in that case.

The Cython module ``_dbm_ext`` implements exactly the same functions; the
selector in ``_kernel`` picks one of the two at import time.
"""

INF = 1 << 60
LE_ZERO = 1


def _add(a, b):
    if a == INF or b == INF:
        return INF
    return a + b - ((a | b) & 1)


def close(m, n):
    """Floyd-Warshall tightening. Returns the canonical tuple or None."""
    d = list(m)
    for k in range(n):
        rk = k * n
        for i in range(n):
            dik = d[i * n + k]
            if dik == INF:
                continue
            ri = i * n
            for j in range(n):
                dkj = d[rk + j]
                if dkj == INF:
                    continue
                s = dik + dkj - ((dik | dkj) & 1)
                if s < d[ri + j]:
                    d[ri + j] = s
    for i in range(n):
        if d[i * n + i] < LE_ZERO:
            return None
    return tuple(d)


def constrain(m, n, i, j, b):
    """Add ``x_i - x_j <= b`` to a canonical DBM and re-close in O(n^2)."""
    if b >= m[i * n + j]:
        return m
    # negative cycle through the new edge?
    if _add(b, m[j * n + i]) < LE_ZERO:
        return None
    d = list(m)
    d[i * n + j] = b
    for k in range(n):
        dki = d[k * n + i]
        if dki == INF:
            continue
        via = _add(dki, b)
        rk = k * n
        for l in range(n):
            djl = d[j * n + l]
            if djl == INF:
                continue
            s = _add(via, djl)
            if s < d[rk + l]:
                d[rk + l] = s
    return tuple(d)


def intersect(m1, m2, n):
    d = [a if a < b else b for a, b in zip(m1, m2)]
    return close(d, n)


def up(m, n):
    d = list(m)
    for i in range(1, n):
        d[i * n] = INF
    return tuple(d)


def down(m, n):
    d = list(m)
    for i in range(1, n):
        d[i] = LE_ZERO
    return close(d, n)


def reset(m, n, clocks):
    d = list(m)
    for c in clocks:
        for j in range(n):
            d[c * n + j] = d[j]          # x_c - x_j  <-  0 - x_j
            d[j * n + c] = d[j * n]      # x_j - x_c  <-  x_j - 0
        d[c * n + c] = LE_ZERO
    return close(d, n)


def free(m, n, clocks):
    d = list(m)
    for c in clocks:
        for j in range(n):
            if j != c:
                d[c * n + j] = INF
                d[j * n + c] = d[j * n]
        d[c] = LE_ZERO
    return close(d, n)


def extrapolate(m, n, maxes):
    """Extra+ widening; ``maxes[i]`` is the scaled bound for clock i (index 0 unused)."""
    d = list(m)
    lower_above = [False] * n
    for i in range(1, n):
        lower_above[i] = m[i] < -2 * maxes[i] + 1
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            b = m[i * n + j]
            if b == INF:
                continue
            if i != 0 and (b > 2 * maxes[i] + 1 or lower_above[i]):
                d[i * n + j] = INF
            elif j != 0 and lower_above[j]:
                d[i * n + j] = INF if i != 0 else -2 * maxes[j]
    return close(d, n)


def includes(m1, m2):
    """True when the zone of ``m2`` is a subset of the zone of ``m1``."""
    for a, b in zip(m1, m2):
        if b > a:
            return False
    return True
