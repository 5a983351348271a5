"""Time the weight-table kernels: compiled extension vs. the numpy fallback.

Run from the repository root after an editable install:

    python3 benchmarks/bench_gtable.py
"""

import time

import numpy as np

from annealed_ising.kernels import KERNEL_BACKEND, gtable_values


def bench(d: int, n: int, beta: float, repeats: int = 3) -> None:
    timings = {}
    results = {}
    for backend in ("numpy", "cython"):
        try:
            gtable_values(d, n, beta, backend=backend)  # warm-up / availability probe
        except RuntimeError as exc:
            print(f"  {backend:>6}: unavailable ({exc})")
            continue
        best = float("inf")
        for _ in range(repeats):
            t0 = time.perf_counter()
            results[backend] = gtable_values(d, n, beta, backend=backend)
            best = min(best, time.perf_counter() - t0)
        timings[backend] = best
        print(f"  {backend:>6}: {best * 1e3:8.1f} ms")
    if len(results) == 2:
        diff = float(np.max(np.abs(results["numpy"] - results["cython"])))
        ratio = timings["numpy"] / timings["cython"]
        print(f"  max |numpy - cython| = {diff:.3e}, speedup x{ratio:.1f}")


def main() -> None:
    print(f"default backend: {KERNEL_BACKEND}")
    for d, n in ((3, 1000), (3, 4000), (4, 2000)):
        print(f"d={d}, n={n}, beta=0.55:")
        bench(d, n, 0.55)


if __name__ == "__main__":
    main()
