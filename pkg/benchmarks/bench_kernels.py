"""Compare the pure-Python and compiled DBM kernels.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Reports per-call kernel timings on random 3-clock DBMs, and end-to-end
zone-graph construction plus a timed-bisimulation check on random automata.
DBMs here are tiny (at most 3x3 or 4x4), so Python call overhead dominates
and the speedup is modest; the end-to-end numbers show how much of the
total runtime is kernel work at all.
"""

import argparse
import random
import timeit

from timedrel import _kernel
from timedrel.relations import cp_bisim
from timedrel.samples import random_pair
from timedrel.zone import Zone, atom_constraints


def _random_zones(rng, k, nclocks=3):
    zones = []
    while len(zones) < k:
        cons = []
        for c in range(1, nclocks + 1):
            lo = rng.randint(0, 4)
            cons += atom_constraints(c, ">=", lo) + atom_constraints(c, "<=", lo + rng.randint(0, 4))
        z = Zone.from_constraints(nclocks, cons)
        if not z.is_empty():
            zones.append(z)
    return zones


def kernel_cases(zones):
    n = zones[0].n
    ms = [z.m for z in zones]
    maxes = [0] + [2 * 2 + 1] * (n - 1)
    return {
        "close": lambda: [_kernel.close(m, n) for m in ms],
        "up": lambda: [_kernel.up(m, n) for m in ms],
        "reset": lambda: [_kernel.reset(m, n, (1,)) for m in ms],
        "intersect": lambda: [_kernel.intersect(a, b, n) for a, b in zip(ms, ms[1:])],
        "includes": lambda: [_kernel.includes(a, b) for a, b in zip(ms, ms[1:])],
        "extrapolate": lambda: [_kernel.extrapolate(m, n, maxes) for m in ms],
    }


def end_to_end(pairs):
    return lambda: [cp_bisim(A, None, B, None).related for A, B in pairs]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = random.Random(7)
    zones = _random_zones(rng, 200)
    pairs = [random_pair(random.Random(s), n_clocks=2, max_const=3) for s in range(15)]
    backends = _kernel.available_backends()
    rows = {}
    for be in backends:
        _kernel.use_backend(be)
        for name, fn in kernel_cases(zones).items():
            rows.setdefault(name, {})[be] = min(timeit.repeat(fn, number=5, repeat=args.repeat)) / (5 * len(zones))
        rows.setdefault("cp_bisim x15", {})[be] = min(timeit.repeat(end_to_end(pairs), number=1, repeat=args.repeat))
    print(f"{'case':16s}" + "".join(f"{b:>14s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, r in rows.items():
        unit = 1e6 if "x15" not in name else 1.0
        line = f"{name:16s}" + "".join(f"{r[b] * unit:14.3f}" for b in backends)
        if len(backends) > 1:
            line += f"{r['python'] / r['cython']:11.2f}x"
        print(line)
    print("(kernel rows: microseconds per call; end-to-end rows: seconds)")
    if "cython" not in backends:
        print("compiled kernel not available; only the pure-Python backend was timed")


if __name__ == "__main__":
    main()
