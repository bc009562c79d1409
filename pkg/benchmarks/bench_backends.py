#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallbacks.

Three workloads, one per hot loop:
  dp-tables   bottom-up table sweep for a subset-sum chain with wide domains
  brute-box   exhaustive boundary scan over a blocking gadget's domain box
  treewidth   subset DP for exact treewidth on a chorded cycle

Usage: python benchmarks/bench_backends.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import time

import ilpk.backend as backend_mod
from ilpk import _pykernels
from ilpk import (BoundariedIlp, BoundarySet, DomainInterval, GaifmanGraph,
                  brute_boundary_set, build_blocking_gadget, dp_tables, gen_subset_sum,
                  make_nice, normalize, treewidth_exact)
from ilpk.caps import Caps

try:
    from ilpk import _kernels
except ImportError:
    _kernels = None


def workload_dp_tables():
    rng = random.Random(1)
    items = [rng.randint(20, 50) for _ in range(8)]
    ilp, td = gen_subset_sum(items, sum(items) // 2)
    nilp = normalize(ilp)
    ngd = make_nice(nilp, td)
    caps = Caps(dp_cells=1 << 30)

    def run():
        tables = dp_tables(nilp, ngd, caps)
        return sum(len(t.data) for t in tables)

    return run


def workload_brute_box():
    blocked = BoundarySet.of(2, [(0, 0), (1, 1), (2, 2)])
    gadget = build_blocking_gadget([DomainInterval(0, 2)] * 2, blocked)

    def run():
        return len(brute_boundary_set(gadget, Caps(brute_box=1 << 26)).tuples)

    return run


def workload_treewidth():
    n = 18
    edges = [(i, (i + 1) % n) for i in range(n)]
    edges += [(i, (i + 5) % n) for i in range(0, n, 2)]
    g = GaifmanGraph.from_edges(n, edges)

    def run():
        width, _ = treewidth_exact(g)
        return width

    return run


WORKLOADS = [
    ("dp-tables", workload_dp_tables),
    ("brute-box", workload_brute_box),
    ("treewidth", workload_treewidth),
]


def time_run(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if _kernels is None:
        print("compiled kernels unavailable; timing the pure backend only")
    print(f"{'workload':<12} {'python':>10} {'compiled':>10} {'speedup':>9}")
    for name, make in WORKLOADS:
        fn = make()
        backend_mod._impl = _pykernels
        py_time, py_result = time_run(fn, args.repeat)
        if _kernels is not None:
            backend_mod._impl = _kernels
            c_time, c_result = time_run(fn, args.repeat)
            assert c_result == py_result, f"{name}: backends disagree"
            print(f"{name:<12} {py_time:>9.3f}s {c_time:>9.3f}s {py_time / c_time:>8.1f}x")
        else:
            print(f"{name:<12} {py_time:>9.3f}s {'-':>10} {'-':>9}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
