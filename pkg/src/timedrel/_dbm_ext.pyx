# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled DBM kernels; same contract as ``timedrel._dbm_py``."""

DEF MAXDIM = 16

cdef long long INF = 1LL << 60
cdef long long LE_ZERO = 1


cdef inline long long _add(long long a, long long b):
    if a == INF or b == INF:
        return INF
    return a + b - ((a | b) & 1)


cdef bint _close(long long* d, int n):
    cdef int i, j, k
    cdef long long dik, dkj, s
    for k in range(n):
        for i in range(n):
            dik = d[i * n + k]
            if dik == INF:
                continue
            for j in range(n):
                dkj = d[k * n + j]
                if dkj == INF:
                    continue
                s = dik + dkj - ((dik | dkj) & 1)
                if s < d[i * n + j]:
                    d[i * n + j] = s
    for i in range(n):
        if d[i * n + i] < LE_ZERO:
            return False
    return True


cdef inline void _load(object m, long long* d, int size):
    cdef int i
    for i in range(size):
        d[i] = m[i]


cdef inline tuple _store(long long* d, int size):
    return tuple([d[i] for i in range(size)])


def close(m, int n):
    cdef long long d[MAXDIM * MAXDIM]
    _load(m, d, n * n)
    if not _close(d, n):
        return None
    return _store(d, n * n)


def constrain(m, int n, int i, int j, long long b):
    cdef long long d[MAXDIM * MAXDIM]
    cdef int k, l
    cdef long long dki, via, djl, s
    if b >= m[i * n + j]:
        return m
    if _add(b, m[j * n + i]) < LE_ZERO:
        return None
    _load(m, d, n * n)
    d[i * n + j] = b
    for k in range(n):
        dki = d[k * n + i]
        if dki == INF:
            continue
        via = _add(dki, b)
        for l in range(n):
            djl = d[j * n + l]
            if djl == INF:
                continue
            s = _add(via, djl)
            if s < d[k * n + l]:
                d[k * n + l] = s
    return _store(d, n * n)


def intersect(m1, m2, int n):
    cdef long long d[MAXDIM * MAXDIM]
    cdef int i
    cdef long long a, b
    for i in range(n * n):
        a = m1[i]
        b = m2[i]
        d[i] = a if a < b else b
    if not _close(d, n):
        return None
    return _store(d, n * n)


def up(m, int n):
    cdef long long d[MAXDIM * MAXDIM]
    cdef int i
    _load(m, d, n * n)
    for i in range(1, n):
        d[i * n] = INF
    return _store(d, n * n)


def down(m, int n):
    cdef long long d[MAXDIM * MAXDIM]
    cdef int i
    _load(m, d, n * n)
    for i in range(1, n):
        d[i] = LE_ZERO
    if not _close(d, n):
        return None
    return _store(d, n * n)


def reset(m, int n, clocks):
    cdef long long d[MAXDIM * MAXDIM]
    cdef int c, j
    _load(m, d, n * n)
    for c in clocks:
        for j in range(n):
            d[c * n + j] = d[j]
            d[j * n + c] = d[j * n]
        d[c * n + c] = LE_ZERO
    if not _close(d, n):
        return None
    return _store(d, n * n)


def free(m, int n, clocks):
    cdef long long d[MAXDIM * MAXDIM]
    cdef int c, j
    _load(m, d, n * n)
    for c in clocks:
        for j in range(n):
            if j != c:
                d[c * n + j] = INF
                d[j * n + c] = d[j * n]
        d[c] = LE_ZERO
    if not _close(d, n):
        return None
    return _store(d, n * n)


def extrapolate(m, int n, maxes):
    cdef long long d[MAXDIM * MAXDIM]
    cdef long long mx[MAXDIM]
    cdef bint lower_above[MAXDIM]
    cdef int i, j
    cdef long long b
    _load(m, d, n * n)
    lower_above[0] = False
    for i in range(1, n):
        mx[i] = maxes[i]
        lower_above[i] = m[i] < -2 * mx[i] + 1
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            b = m[i * n + j]
            if b == INF:
                continue
            if i != 0 and (b > 2 * mx[i] + 1 or lower_above[i]):
                d[i * n + j] = INF
            elif j != 0 and lower_above[j]:
                if i != 0:
                    d[i * n + j] = INF
                else:
                    d[i * n + j] = -2 * mx[j]
    if not _close(d, n):
        return None
    return _store(d, n * n)


def includes(m1, m2):
    cdef Py_ssize_t i
    for i in range(len(m1)):
        if m2[i] > m1[i]:
            return False
    return True
