"""Optional thread parallelism, capped by ``POLARITON_THREADS``."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np


def max_workers() -> int:
    try:
        n = int(os.environ.get("POLARITON_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def map_chunks(func, grid: np.ndarray, chunk: int = 65536) -> np.ndarray:
    """Apply an elementwise ``func`` over ``grid`` in chunks.

    Results are identical to ``func(grid)`` whatever the number of threads.
    """
    n = max_workers()
    if n == 1 or grid.size <= chunk:
        return np.asarray(func(grid))
    pieces = [grid[i:i + chunk] for i in range(0, grid.size, chunk)]
    with ThreadPoolExecutor(n) as pool:
        return np.concatenate(list(pool.map(func, pieces)))


def map_items(func, items) -> list:
    """``[func(x) for x in items]``, threaded when allowed; order preserved."""
    items = list(items)
    n = max_workers()
    if n == 1 or len(items) <= 1:
        return [func(x) for x in items]
    with ThreadPoolExecutor(n) as pool:
        return list(pool.map(func, items))
