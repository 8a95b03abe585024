"""Seeded, order-independent Monte Carlo accumulation.

Each sample gets its own 64-bit seed derived from (master seed, sample index),
so results are identical whether samples run serially or across a process
pool, and identical under any scheduling order.  Workers return dictionaries
of integer-valued accumulators (Python ints or integer numpy arrays); sums of
integers are exact, which is what makes the merge order-independent.
"""

from __future__ import annotations

import multiprocessing
import os
from functools import partial

import numpy as np

from .seeding import derive_key


def sample_seed(master_seed: int, index: int) -> int:
    return derive_key(master_seed, index, 0xA5A5)


def _merge_into(acc: dict, part: dict):
    for key, value in part.items():
        if key not in acc:
            acc[key] = value.copy() if isinstance(value, np.ndarray) else value
        elif isinstance(value, np.ndarray):
            acc[key] = acc[key] + value
        elif isinstance(value, list):
            acc[key] = [a + b for a, b in zip(acc[key], value)]
        else:
            acc[key] = acc[key] + value


def _run_chunk(worker, master_seed: int, indices) -> dict:
    acc: dict = {}
    for i in indices:
        _merge_into(acc, worker(i, sample_seed(master_seed, i)))
    return acc


def resolve_processes(processes) -> int:
    if processes in (None, "auto"):
        return max(1, os.cpu_count() or 1)
    return max(1, int(processes))


def accumulate(worker, samples: int, seed: int, processes=1) -> dict:
    """Sum worker(i, seed_i) over i = 0..samples-1, optionally in parallel.

    ``worker`` must be picklable (module-level function, possibly wrapped in
    functools.partial) when processes > 1.
    """
    processes = resolve_processes(processes)
    if processes == 1 or samples < 4:
        return _run_chunk(worker, seed, range(samples))
    n_chunks = min(processes * 8, samples)
    bounds = np.linspace(0, samples, n_chunks + 1).astype(int)
    chunks = [range(bounds[i], bounds[i + 1]) for i in range(n_chunks) if bounds[i] < bounds[i + 1]]
    acc: dict = {}
    with multiprocessing.Pool(processes) as pool:
        for part in pool.imap_unordered(partial(_run_chunk, worker, seed), chunks):
            _merge_into(acc, part)
    return acc


def bernoulli_stats(successes, samples: int):
    """Mean and standard error of a counted indicator."""
    p = successes / samples
    return p, np.sqrt(np.maximum(p * (1.0 - p), 0.0) / samples)


def mean_stats(total, total_sq, samples: int):
    """Mean and standard error from exact integer sums."""
    mean = total / samples
    var = total_sq / samples - mean * mean
    return mean, np.sqrt(np.maximum(var, 0.0) / samples)
