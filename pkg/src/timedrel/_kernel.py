"""Backend selection for the DBM kernels.

The compiled extension is used when it was built; otherwise the pure-Python
module is used.  Setting ``TIMEDREL_PURE_PYTHON=1`` forces the fallback.
Callers go through this module's attributes (``_kernel.close(...)``) so that
:func:`use_backend` can swap implementations at runtime, e.g. for benchmarks.
"""

import os

from . import _dbm_py

INF = _dbm_py.INF
LE_ZERO = _dbm_py.LE_ZERO

_FUNCS = ("close", "constrain", "intersect", "up", "down", "reset", "free",
          "extrapolate", "includes")

try:  # pragma: no cover - depends on build
    from . import _dbm_ext
except ImportError:  # pragma: no cover
    _dbm_ext = None

BACKEND = "python"


def available_backends():
    return ["python"] + (["cython"] if _dbm_ext is not None else [])


def use_backend(name):
    """Rebind the kernel functions to ``'python'`` or ``'cython'``."""
    global BACKEND
    if name == "cython":
        if _dbm_ext is None:
            raise RuntimeError("compiled DBM extension is not available")
        mod = _dbm_ext
    elif name == "python":
        mod = _dbm_py
    else:
        raise ValueError(f"unknown backend {name!r}")
    g = globals()
    for f in _FUNCS:
        g[f] = getattr(mod, f)
    BACKEND = name


close = constrain = intersect = up = down = reset = free = None
extrapolate = includes = None

if _dbm_ext is not None and not os.environ.get("TIMEDREL_PURE_PYTHON"):
    use_backend("cython")
else:
    use_backend("python")
