"""Per-trajectory RNG streams keyed by (seed, trajectory index).

Every trajectory owns an independent generator, so results are bit-identical
no matter how trajectories are partitioned across workers.
"""

from __future__ import annotations

import numpy as np


def trajectory_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.array([seed, index],
                                                             dtype=np.uint64)))


def chunked(total: int, chunk: int):
    start = 0
    while start < total:
        stop = min(start + chunk, total)
        yield start, stop
        start = stop


def normal_block(seed: int, start: int, stop: int, shape: tuple[int, ...]) -> np.ndarray:
    """Standard-normal block (stop-start, *shape), one stream per trajectory."""
    out = np.empty((stop - start,) + shape)
    for i in range(start, stop):
        out[i - start] = trajectory_rng(seed, i).standard_normal(shape)
    return out
