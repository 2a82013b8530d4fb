"""Time the numba loops against the numpy fallback on typical problem sizes.

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from irs_seclab import kernels
from irs_seclab.covert import CovertnessParams, _beta_combos
from irs_seclab.detector import covertness_table


def timeit(fn, repeat=5):
    fn()  # warm up (and compile)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def cn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def bench_secrecy_ascent(n=32):
    rng = np.random.default_rng(0)
    db, de, cb, ce = complex(cn(rng)), complex(cn(rng)), cn(rng, n), cn(rng, n)
    grid = 2 * np.pi * np.arange(256) / 256
    init = rng.uniform(0, 2 * np.pi, (10, n))
    args = (db, de, cb, ce, np.ones(n), 10.0, 10.0, np.cos(grid), np.sin(grid), grid, True, init, 1e-6, 200, 1)
    return [timeit(lambda: mod.secrecy_ascent(*args)) for mod in (kernels.loops, kernels.vectorized)]


def bench_covert_bruteforce(n=3):
    rng = np.random.default_rng(1)
    t = covertness_table(100)
    combos = _beta_combos(tuple(np.linspace(0, 1, 6)), n)
    theta = 2 * np.pi * np.arange(8) / 8
    thr = np.array([CovertnessParams(e).threshold for e in (0.05, 0.1, 0.2, 0.4)])
    args = (combos, complex(cn(rng)), cn(rng, n), complex(cn(rng)), 0.3 * cn(rng, n), 0.4,
            rng.uniform(0.1, 0.5, n), np.cos(theta), np.sin(theta), np.logspace(-1, 2, 16), thr,
            t.values, t.x0, t.dx)
    return [timeit(lambda: mod.covert_bruteforce(*args), repeat=3) for mod in (kernels.loops, kernels.vectorized)]


if __name__ == "__main__":
    print(f"numba available: {kernels.NUMBA_AVAILABLE}, default backend: {kernels.BACKEND}")
    for name, fn in [("secrecy_ascent N=32", bench_secrecy_ascent),
                     ("covert_bruteforce N=3", bench_covert_bruteforce)]:
        t_loops, t_vec = fn()
        print(f"{name:24s} numba {t_loops * 1e3:9.2f} ms   numpy {t_vec * 1e3:9.2f} ms   "
              f"speedup {t_vec / t_loops:6.1f}x")
