"""Both DBM kernels must agree on every operation."""

import os
import random
import subprocess
import sys

import pytest
from hypothesis import given, settings, strategies as st

from timedrel import _dbm_py, _kernel
from timedrel.zone import Zone, atom_constraints

needs_ext = pytest.mark.skipif("cython" not in _kernel.available_backends(),
                               reason="compiled kernel not built")

atoms = st.lists(st.tuples(st.integers(1, 2), st.sampled_from(["<", "<=", "=", ">=", ">"]),
                           st.integers(0, 4)), max_size=4)
diag = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-9, 9)), max_size=2)


def _matrix(atom_list, diags):
    n = 3
    m = list(_dbm_py.close(Zone.universe(2).m, n))
    for c, op, k in atom_list:
        for i, j, b in atom_constraints(c, op, 2 * k):
            m[i * n + j] = min(m[i * n + j], b)
    for i, j, b in diags:
        if i != j:
            m[i * n + j] = min(m[i * n + j], b)
    return tuple(m)


@needs_ext
@settings(max_examples=200, deadline=None)
@given(atoms, diag, atoms, st.sets(st.integers(1, 2)), st.lists(st.integers(0, 9), min_size=2, max_size=2))
def test_backends_agree(a1, d1, a2, resets, maxes):
    from timedrel import _dbm_ext
    n = 3
    m1, m2 = _matrix(a1, d1), _matrix(a2, [])
    c1p, c1c = _dbm_py.close(m1, n), _dbm_ext.close(m1, n)
    assert c1p == c1c
    c2 = _dbm_py.close(m2, n)
    if c1p is None or c2 is None:
        return
    mx = [0] + maxes
    for f in ("up", "down"):
        assert getattr(_dbm_py, f)(c1p, n) == getattr(_dbm_ext, f)(c1p, n)
    assert _dbm_py.reset(c1p, n, sorted(resets)) == _dbm_ext.reset(c1p, n, sorted(resets))
    assert _dbm_py.free(c1p, n, sorted(resets)) == _dbm_ext.free(c1p, n, sorted(resets))
    assert _dbm_py.intersect(c1p, c2, n) == _dbm_ext.intersect(c1p, c2, n)
    assert _dbm_py.includes(c1p, c2) == _dbm_ext.includes(c1p, c2)
    assert _dbm_py.extrapolate(c1p, n, mx) == _dbm_ext.extrapolate(c1p, n, mx)
    for i, j in ((1, 0), (0, 2), (1, 2)):
        b = 2 * random.Random(i + j).randint(-3, 3) + 1
        assert _dbm_py.constrain(c1p, n, i, j, b) == _dbm_ext.constrain(c1p, n, i, j, b)


def test_use_backend_rejects_unknown():
    with pytest.raises(ValueError):
        _kernel.use_backend("fortran")


def test_env_var_forces_fallback():
    out = subprocess.run(
        [sys.executable, "-c", "from timedrel import _kernel; print(_kernel.BACKEND)"],
        env={**os.environ, "TIMEDREL_PURE_PYTHON": "1"}, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_zone_graph_identical_across_backends(backend, fast_slow):
    from timedrel.zone_graph import ZoneGraph
    G = ZoneGraph(fast_slow[0])
    assert [n.zone.render(["x"]) for n in G.nodes] == ["0<=x<2", "x=2", "2<x", "0<x"]
