"""Benchmark the compiled kernels against their pure-NumPy/Python fallbacks.

Run: python3 benchmarks/bench_kernels.py

With RIPSCOLLAPSE_DISABLE_NUMBA=1 the compiled side is unavailable and only
the fallback implementations are timed.
"""
from __future__ import annotations

import math
import random
import time

import numpy as np

from ripscollapse import _kernels
from ripscollapse.collapse import _csr_positions
from ripscollapse.persistence import BoundaryMatrix, _BIT
from ripscollapse.pipeline import run_pipeline
from ripscollapse.rips import SnapshotSchedule, pairwise_distances, rips_snapshot
from ripscollapse.tower import Filtration

N_WARMUP = 2
N_RUNS = 7


def _time(fn, *args):
    for _ in range(N_WARMUP):
        fn(*args)
    times = []
    for _ in range(N_RUNS):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return times


def _print_results(label, times_fast, times_py):
    mean_fast = np.mean(times_fast) * 1000
    mean_py = np.mean(times_py) * 1000
    std_fast = np.std(times_fast) * 1000
    std_py = np.std(times_py) * 1000
    print(f"  compiled: {mean_fast:8.3f} +- {std_fast:.3f} ms")
    print(f"  fallback: {mean_py:8.3f} +- {std_py:.3f} ms")
    if mean_fast > 0:
        print(f"  speedup:  {mean_py / mean_fast:8.2f}x")


def _circle_cloud(n, seed):
    rng = random.Random(seed)
    pts = []
    for _ in range(n):
        a = rng.uniform(0.0, 2.0 * math.pi)
        r = 1.0 + rng.uniform(-0.05, 0.05)
        pts.append((r * math.cos(a), r * math.sin(a)))
    return pts


def _dim1_block(cells):
    """Pack the dimension-1 boundary block the way the reduction does."""
    matrix = BoundaryMatrix.from_filtration(Filtration(cells))
    rows_g = [i for i, (s, _) in enumerate(matrix.cells) if len(s) == 1]
    cols_g = [i for i, (s, _) in enumerate(matrix.cells) if len(s) == 2]
    local_of = np.full(len(matrix.cells), -1, np.int64)
    local_of[rows_g] = np.arange(len(rows_g), dtype=np.int64)
    faces_flat = np.asarray(
        [f for g in cols_g for f in matrix.columns[g]], dtype=np.int64
    )
    faces_local = local_of[faces_flat]
    col_idx = np.repeat(np.arange(len(cols_g), dtype=np.int64), 2)
    n_words = (len(rows_g) + 63) // 64
    R = np.zeros((len(cols_g), n_words), np.uint64)
    np.bitwise_or.at(R, (col_idx, faces_local >> 6), _BIT[faces_local & 63])
    return R, len(rows_g)


def bench_pairwise():
    print("--- pairwise distance matrix (2000 points, 3-d) ---")
    rng = np.random.default_rng(0)
    X = rng.random((2000, 3))
    py = _kernels.PY_IMPLS["pairwise_numpy"]
    times_py = _time(py, X)
    if _kernels.USING_NUMBA:
        times_fast = _time(_kernels.pairwise_kernel, X)
        _print_results("pairwise", times_fast, times_py)
    else:
        print(f"  fallback: {np.mean(times_py) * 1000:8.3f} ms (compiled path disabled)")


def bench_collapse():
    print("--- strong collapse (400-point noisy circle, t=0.4) ---")
    D = pairwise_distances(_circle_cloud(400, seed=1))
    m = rips_snapshot(D, 0.4)
    _, _, row_ptr, row_entries, col_ptr, col_entries = _csr_positions(m)
    args = (row_ptr, row_entries, col_ptr, col_entries)
    print(f"  input: {len(m.vertex_ids)} vertices x {len(m.column_ids)} maximal")
    py = _kernels.PY_IMPLS["collapse"]
    times_py = _time(py, *args)
    if _kernels.USING_NUMBA:
        times_fast = _time(_kernels.collapse_kernel, *args)
        _print_results("collapse", times_fast, times_py)
    else:
        print(f"  fallback: {np.mean(times_py) * 1000:8.3f} ms (compiled path disabled)")


def bench_reduce():
    print("--- boundary reduction, dimension-1 block (3000-point geometric graph) ---")
    rng = np.random.default_rng(2)
    D = pairwise_distances(rng.random((3000, 2)))
    cells = [((i,), 0.0) for i in range(D.shape[0])]
    for i in range(D.shape[0]):
        for j in range(i + 1, D.shape[0]):
            if D[i, j] <= 0.04:
                cells.append(((i, j), 0.0))
    R, n_rows = _dim1_block(cells)
    print(f"  input: {R.shape[0]} columns x {n_rows} rows")

    def run(impl, R0):
        work = R0.copy()
        skip = np.zeros(work.shape[0], np.bool_)
        pivot_of_row = np.full(n_rows, -1, np.int64)
        pair_local = np.empty(work.shape[0], np.int64)
        impl(work, skip, pivot_of_row, pair_local)

    py = _kernels.PY_IMPLS["reduce_block"]
    times_py = _time(run, py, R)
    if _kernels.USING_NUMBA:
        times_fast = _time(run, _kernels.reduce_block, R)
        _print_results("reduce", times_fast, times_py)
    else:
        print(f"  fallback: {np.mean(times_py) * 1000:8.3f} ms (compiled path disabled)")


def bench_pipeline():
    print("--- full pipeline (120-point noisy circle, 41 snapshots) ---")
    D = pairwise_distances(_circle_cloud(120, seed=3))
    sched = SnapshotSchedule(0.1, 0.01, 0.5)

    times = _time(lambda: run_pipeline(D, sched))
    mode = "compiled" if _kernels.USING_NUMBA else "fallback"
    print(f"  {mode}: {np.mean(times) * 1000:8.3f} +- {np.std(times) * 1000:.3f} ms")
    if _kernels.USING_NUMBA:
        print(f"  (set {_kernels.ENV_FLAG}=1 and rerun to time the fallback path)")
    else:
        print(f"  (unset {_kernels.ENV_FLAG} and rerun to time the compiled path)")


def main() -> None:
    mode = "compiled kernels" if _kernels.USING_NUMBA else "fallback only"
    print(f"kernel path: {mode}\n")
    bench_pairwise()
    print()
    bench_collapse()
    print()
    bench_reduce()
    print()
    bench_pipeline()


if __name__ == "__main__":
    main()
