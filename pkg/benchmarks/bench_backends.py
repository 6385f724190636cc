#!/usr/bin/env python3
"""Timing comparison of the compiled and pure-Python kernels.

Runs the same eigensolves and matching searches through both backends and
prints one table row per task.  Every row also checks that the two
implementations return identical results (eigenvalues within 1e-10,
matching selections byte-equal), so this doubles as a smoke test that the
backends stay interchangeable.

Usage:
    python3 benchmarks/bench_backends.py
    python3 benchmarks/bench_backends.py --sizes 100 300 --seed 11
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from randomgroups._backend import backend_name, get_kernels
from randomgroups.matching import _part_arrays, sample_hypergraph
from randomgroups.models import sample_gnm
from randomgroups.spectral import laplacian


def _timed(fn):
    """(best seconds, result); short calls get a best-of-6 to cut noise."""
    t0 = time.perf_counter()
    result = fn()
    best = time.perf_counter() - t0
    if best < 0.05:
        for _ in range(5):
            t0 = time.perf_counter()
            result = fn()
            best = min(best, time.perf_counter() - t0)
    return best, result


def bench_eig(kernels, n: int, rng: random.Random):
    mat = laplacian(sample_gnm(n, 6 * n, rng))
    times, results = zip(*(_timed(lambda k=k: k.sym_eigvals(mat)) for k in kernels))
    diff = float(np.max(np.abs(np.asarray(results[0]) - np.asarray(results[1]))))
    return f"eigensolve gnm n={n} M={6 * n}", times, diff <= 1e-10


def bench_match(kernels, mode, part, m, budget, rng):
    h = sample_hypergraph(part, m, rng)
    xs, ys, zs = _part_arrays(h)
    if mode == "heuristic":
        calls = [
            lambda k=k: k.heuristic_match(xs, ys, zs, part, 40, 9, budget=budget)
            for k in kernels
        ]
    else:
        calls = [lambda k=k: k.exact_match(xs, ys, zs, part, budget) for k in kernels]
    times, results = zip(*(_timed(call) for call in calls))
    label = f"{mode} match part={part} M={m} ({results[0][0]})"
    return label, times, results[0] == results[1]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--sizes",
        type=int,
        nargs="+",
        default=[100, 300, 600, 1000],
        help="graph sizes for the eigensolver rows",
    )
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    kernels = (get_kernels("c"), get_kernels("py"))
    rng = random.Random(args.seed)
    print(f"default backend for this environment: {backend_name()}")
    print(f"{'task':44s} {'c':>9s} {'py':>9s} {'py/c':>7s}  agree")

    rows = [bench_eig(kernels, n, rng) for n in args.sizes]
    rows.append(bench_match(kernels, "heuristic", 150, 11_250, 400_000, rng))
    rows.append(bench_match(kernels, "heuristic", 150, 5_600, 300_000, rng))
    rows.append(bench_match(kernels, "exact", 8, 100, 2_000_000, rng))
    rows.append(bench_match(kernels, "exact", 12, 60, 2_000_000, rng))

    all_agree = True
    for label, (tc, tp), agree in rows:
        all_agree &= agree
        print(
            f"{label:44s} {tc:8.4f}s {tp:8.4f}s {tp / tc:6.1f}x  "
            f"{'yes' if agree else 'NO'}"
        )
    if not all_agree:
        print("backend results disagree; see rows marked NO")
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
