"""Compare the compiled kernels against the pure-Python fallback.

Runs the three hot loops (counter-based atom sampling, dense matrix fill,
joint class counting) at reconstruction scale and prints the timings plus
the speedup. Both backends must produce identical bytes; that is asserted
here as well as in the test-suite.

Usage: python benchmarks/benchmark_kernels.py [N]
"""

import sys
import time
from array import array
from fractions import Fraction

from matdist import FiniteFunction, FiniteMeasureSpace
from matdist import _kernels_py as pure
from matdist.distribution import thresholds

try:
    from matdist import _ckernels as compiled
except ImportError:
    compiled = None


def build_inputs(n):
    f = FiniteFunction(
        FiniteMeasureSpace(("a", "b", "c"), (Fraction(1, 2), Fraction(1, 3), Fraction(1, 6))),
        FiniteMeasureSpace(("u", "v", "w", "z"), (Fraction(1, 4),) * 4),
        (
            ("0", "1", "0", "2"),
            ("1", "0", "2", "0"),
            ("2", "2", "1", "1"),
        ),
    )
    thr_x = thresholds(f.x_space)
    thr_y = thresholds(f.y_space)
    code_matrix = array("i", [{"0": 0, "1": 1, "2": 2}[v] for row in f.values for v in row])
    return f, thr_x, thr_y, code_matrix


def time_backend(backend, n, thr_x, thr_y, code_matrix, repeats=3):
    results = {}
    best = {}
    for _ in range(repeats):
        t0 = time.perf_counter()
        rows = backend.sample_indices(2024, 0, n, thr_x)
        cols = backend.sample_indices(2024, 1, n, thr_y)
        t1 = time.perf_counter()
        codes = backend.fill_codes(rows, cols, code_matrix, 4)
        t2 = time.perf_counter()
        counts = backend.joint_counts(rows, cols, codes, 3, 4, 3)
        t3 = time.perf_counter()
        for name, dt in (("sample", t1 - t0), ("fill", t2 - t1), ("joint", t3 - t2)):
            best[name] = min(best.get(name, dt), dt)
        results = {"rows": rows, "cols": cols, "codes": codes, "counts": counts}
    return best, results


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 2000
    _, thr_x, thr_y, code_matrix = build_inputs(n)
    print(f"N = {n} ({n * n} cells)")

    py_times, py_out = time_backend(pure, n, thr_x, thr_y, code_matrix)
    if compiled is None:
        print("compiled backend unavailable; pure-Python timings only")
        for name, dt in py_times.items():
            print(f"  {name:>6}: {dt * 1e3:8.2f} ms")
        return

    c_times, c_out = time_backend(compiled, n, thr_x, thr_y, code_matrix)
    for key in ("rows", "cols", "codes", "counts"):
        assert py_out[key] == c_out[key], f"backend outputs differ on {key}"

    print(f"{'kernel':>8} {'python':>12} {'cython':>12} {'speedup':>9}")
    for name in ("sample", "fill", "joint"):
        p, c = py_times[name], c_times[name]
        print(f"{name:>8} {p * 1e3:10.2f} ms {c * 1e3:10.2f} ms {p / c:8.1f}x")
    print("outputs bit-identical across backends")


if __name__ == "__main__":
    main()
