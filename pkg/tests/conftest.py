import itertools
import sys
from fractions import Fraction
from pathlib import Path

import pytest

from timedrel import _kernel
from timedrel.samples import build, fast_slow_pair

ROOT = Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"
GOLDEN = Path(__file__).resolve().parent / "golden"


def grid(nclocks, step=Fraction(1, 4), top=5):
    """All valuations with coordinates in {0, step, ..., top}."""
    ticks = [step * i for i in range(int(top / step) + 1)]
    return list(itertools.product(ticks, repeat=nclocks))


@pytest.fixture
def fast_slow():
    return fast_slow_pair()


@pytest.fixture
def a_now_later():
    """``a`` immediately versus ``a`` only after time 1 has passed."""
    return (build(["x"], [("l0", "l1", "a", [], ())]),
            build(["y"], [("m0", "m1", "a", [("y", ">", 1)], ())]))


@pytest.fixture(params=_kernel.available_backends())
def backend(request):
    prev = _kernel.BACKEND
    _kernel.use_backend(request.param)
    yield request.param
    _kernel.use_backend(prev)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda l: int(l[2:l.index(" ")])):
            terminalreporter.write_line(line)
