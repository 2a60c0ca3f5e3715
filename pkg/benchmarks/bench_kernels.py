"""Compare the compiled curvature kernel against the numpy fallback.

Both backends share one contract (kernels.curvature_fields), so the
benchmark times the same per-point workload through each and checks
that the outputs agree.

Usage: python benchmarks/bench_kernels.py [--repeats N] [--points N]
"""

from __future__ import annotations

import argparse
import importlib
import time

import numpy as np

from wcurv import _kernels_py
from wcurv.catalog import CATALOG, build
from wcurv.metric import evaluate_metric


def _load_compiled():
    try:
        return importlib.import_module("wcurv._kernels_cy")
    except ImportError:
        return None


def _sample_inputs(n_points: int):
    """Metric-value arrays on a Schwarzschild radial strip."""
    bm = build(CATALOG["schwarzschild"])
    radii = np.linspace(3.0, 12.0, n_points)
    out = []
    for r in radii:
        mv = evaluate_metric(bm.spec, (0.0, float(r), 1.1, 0.4))
        out.append((mv.g, mv.g_inv, mv.dg, mv.d2g, mv.d3g))
    return out


def _time_backend(mod, inputs, repeats: int) -> tuple[float, list]:
    best = float("inf")
    results = []
    for _ in range(repeats):
        start = time.perf_counter()
        results = [mod.curvature_fields(*args) for args in inputs]
        best = min(best, time.perf_counter() - start)
    return best, results


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--points", type=int, default=50)
    args = parser.parse_args()

    inputs = _sample_inputs(args.points)
    compiled = _load_compiled()

    py_time, py_results = _time_backend(_kernels_py, inputs, args.repeats)
    per_pt = py_time / args.points * 1e3
    print(f"python backend:  {py_time:.4f} s total, {per_pt:.3f} ms/point")

    if compiled is None:
        print("compiled backend: not built (pure-Python install)")
        return 0

    cy_time, cy_results = _time_backend(compiled, inputs, args.repeats)
    per_pt = cy_time / args.points * 1e3
    print(f"compiled backend: {cy_time:.4f} s total, {per_pt:.3f} ms/point")
    print(f"speedup: {py_time / cy_time:.2f}x")

    worst = 0.0
    for py_out, cy_out in zip(py_results, cy_results):
        for a, b in zip(py_out, cy_out):
            worst = max(worst, float(np.max(np.abs(np.asarray(a) - np.asarray(b)))))
    print(f"max cross-backend deviation: {worst:.3e}")
    return 0 if worst < 1e-10 else 1


if __name__ == "__main__":
    raise SystemExit(main())
