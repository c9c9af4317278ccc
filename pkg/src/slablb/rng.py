"""Seed plumbing: every randomized trial gets its own generator derived from
``(master_seed, stream, index)`` so batches are reproducible in any order."""

from __future__ import annotations

import zlib
from fractions import Fraction

import numpy as np

# coefficient grid {-K..K}/Q used for random exact instances
GRID_K = 16
GRID_Q = 8


def _stream_id(stream: str) -> int:
    return zlib.crc32(stream.encode())


def trial_rng(seed: int, index: int = 0, stream: str = "") -> np.random.Generator:
    ss = np.random.SeedSequence([int(seed) & (2**64 - 1), _stream_id(stream), int(index)])
    return np.random.Generator(np.random.PCG64(ss))


def grid_fraction(rng: np.random.Generator, k: int = GRID_K, q: int = GRID_Q, nonzero: bool = False) -> Fraction:
    while True:
        v = Fraction(int(rng.integers(-k, k + 1)), q)
        if v or not nonzero:
            return v


def grid_fractions(rng: np.random.Generator, n: int, k: int = GRID_K, q: int = GRID_Q) -> list[Fraction]:
    return [Fraction(int(v), q) for v in rng.integers(-k, k + 1, size=n)]
