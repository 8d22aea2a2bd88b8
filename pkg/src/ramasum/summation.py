"""Deterministic compensated summation over fixed chunks.

The chunk partition is an absolute property of the index range (boundaries at
multiples of CHUNK), never of the worker count, so any parallel dispatch over
chunks reduces in the same order to the same bits.
"""

from __future__ import annotations

import math

import numpy as np

CHUNK = 1 << 20


def fsum_array(a: np.ndarray) -> float:
    """Exactly rounded float sum of a 1-d array."""
    return math.fsum(a.tolist())


def chunk_ranges(start: int, stop: int, chunk: int = CHUNK):
    """Half-open [lo, hi) subranges of [start, stop) cut at multiples of chunk."""
    lo = start
    while lo < stop:
        hi = min(stop, (lo // chunk + 1) * chunk)
        yield lo, hi
        lo = hi


def combine(parts) -> float:
    """Ordered compensated reduction of per-chunk sums."""
    return math.fsum(parts)
