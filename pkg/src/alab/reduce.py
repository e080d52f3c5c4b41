"""Deterministic floating-point reductions.

Sums are exactly rounded within fixed-size blocks (``math.fsum``) and the
block results are combined with ``fsum`` again, so the result depends only
on the data and the block size, never on thread count or scheduling.
"""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

BLOCK = 1 << 16


def block_sums(values: np.ndarray, block: int = BLOCK) -> list[float]:
    flat = np.ascontiguousarray(values, dtype=float).ravel()
    return [math.fsum(flat[lo:lo + block].tolist()) for lo in range(0, flat.size, block)]


def det_sum(values: np.ndarray | Iterable[float], block: int = BLOCK) -> float:
    if not isinstance(values, np.ndarray):
        values = np.fromiter(values, dtype=float)
    return math.fsum(block_sums(values, block))

