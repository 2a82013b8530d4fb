"""Per-trial seed derivation and an order-independent trial runner."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def trial_rng(root_seed: int, *keys: int) -> np.random.Generator:
    """Generator keyed by ``(root_seed, *keys)``.

    The stream for a given key tuple never depends on how many other trials
    exist or in which order they run.
    """
    seq = np.random.SeedSequence(int(root_seed), spawn_key=tuple(int(k) for k in keys))
    return np.random.default_rng(seq)


def default_threads() -> int:
    return max(1, os.cpu_count() or 1)


def run_trials(fn, n_trials: int, threads: int | None = None, chunk: int = 64) -> list:
    """Evaluate ``fn(i)`` for ``i in range(n_trials)``; results come back in index order.

    Work is split in contiguous chunks. Each result lands at its own index, so
    any downstream reduction sees the same sequence whatever ``threads`` is.
    """
    threads = default_threads() if threads is None else max(1, int(threads))
    if threads == 1 or n_trials <= chunk:
        return [fn(i) for i in range(n_trials)]

    def run_chunk(start):
        return [fn(i) for i in range(start, min(start + chunk, n_trials))]

    out = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for part in pool.map(run_chunk, range(0, n_trials, chunk)):
            out.extend(part)
    return out
