"""SplitMix64 generator and the seed-derivation scheme shared by both kernel backends.

Every station owns its own SplitMix64 stream whose initial state is
``substream(run_seed, station_index)``. Batch run ``r`` uses
``substream(base_seed ^ BATCH_SALT, r)`` as its run seed. The compiled
kernels reimplement exactly these functions, so traces are bit-identical
across backends and platforms.
"""
from __future__ import annotations

from typing import List

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
BATCH_SALT = 0x6A09E667F3BCC909
SWEEP_SALT = 0xBB67AE8584CAA73B


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def substream(seed: int, index: int) -> int:
    return mix64((seed & MASK64) ^ mix64(((index + 1) * GOLDEN_GAMMA) & MASK64))


def batch_seeds(base_seed: int, count: int) -> List[int]:
    salted = (base_seed ^ BATCH_SALT) & MASK64
    return [substream(salted, r) for r in range(count)]


def error_threshold(eps) -> tuple:
    """Map an error probability to ``(threshold, always)``.

    A transmission fails when a 64-bit draw is below ``threshold``;
    ``always`` short-circuits eps == 1, which has no 64-bit threshold.
    """
    from fractions import Fraction

    if eps >= 1:
        return 0, True
    return int(Fraction(eps) * (1 << 64)), False


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN_GAMMA) & MASK64
        return mix64(self.state)

    def bounded(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection (no modulo bias)."""
        threshold = ((1 << 64) - n) % n
        while True:
            r = self.next_u64()
            if r >= threshold:
                return r % n
