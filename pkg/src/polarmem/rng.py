"""Seed streams and partitioned execution for Monte Carlo work.

Trials are split into ``partitions`` contiguous shares, each driven by its
own Philox stream spawned from one ``SeedSequence``. Results depend only on
``(seed, partitions)``; the worker count changes wall time, never output.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

RNG_ALGORITHM = "numpy.Philox(SeedSequence.spawn)"
THREADS_ENV = "POLARMEM_THREADS"
DEFAULT_PARTITIONS = 8
CHUNK = 2048


def default_workers() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def streams(seed: int, partitions: int) -> list[np.random.Generator]:
    if partitions < 1:
        raise ValueError("partitions must be >= 1")
    children = np.random.SeedSequence(seed).spawn(partitions)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def split(trials: int, partitions: int) -> list[int]:
    """Share of each partition; the first ``trials % partitions`` get one extra."""
    base, extra = divmod(trials, partitions)
    return [base + (1 if p < extra else 0) for p in range(partitions)]


def chunks(count: int, size: int = CHUNK):
    while count > 0:
        step = min(size, count)
        yield step
        count -= step


def run_partitioned(task, trials: int, seed: int, partitions: int, workers: int | None = None):
    """Call ``task(rng, share)`` per partition and return the results in partition order."""
    gens = streams(seed, partitions)
    shares = split(trials, partitions)
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1:
        return [task(g, s) for g, s in zip(gens, shares)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, gens, shares))
