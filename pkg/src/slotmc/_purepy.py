"""Pure-Python kernels. Same signatures and bit-identical results as ``_kernels``."""
from __future__ import annotations

from typing import List, Sequence, Tuple

from .rng import SplitMix64, substream

CAP_EXCEEDED = -1


def _round(b, gens, slots, det, use_errors, threshold, always):
    """One protocol round in place. Returns (successes, collided, errored)."""
    n = len(slots)
    for i in range(n):
        if not det[i]:
            slots[i] = gens[i].bounded(b)
    occ = [0] * b
    for s in slots:
        occ[s] += 1
    successes = collided = errored = 0
    for i in range(n):
        if occ[slots[i]] != 1:
            det[i] = False
            collided += 1
        elif use_errors and (always or gens[i].next_u64() < threshold):
            det[i] = False
            errored += 1
        else:
            det[i] = True
            successes += 1
    return successes, collided, errored


def convergence_rounds(b: int, n: int, seeds: Sequence[int], cap: int) -> List[int]:
    out = []
    for seed in seeds:
        if n > b:
            out.append(CAP_EXCEEDED)
            continue
        gens = [SplitMix64(substream(seed, i)) for i in range(n)]
        slots = [0] * n
        det = [False] * n
        result = CAP_EXCEEDED
        for r in range(1, cap + 1):
            if _round(b, gens, slots, det, False, 0, False)[0] == n:
                result = r
                break
        out.append(result)
    return out


def round_trace(b: int, n: int, seed: int, rounds: int, threshold: int, always: bool, use_errors: bool):
    """Per-round (successes, collided, errored, slots, det) tuples."""
    gens = [SplitMix64(substream(seed, i)) for i in range(n)]
    slots = [0] * n
    det = [False] * n
    for _ in range(rounds):
        counts = _round(b, gens, slots, det, use_errors, threshold, always)
        yield counts + (tuple(slots), tuple(det))


def error_trace(b: int, n: int, seed: int, rounds: int, threshold: int, always: bool) -> List[int]:
    return [t[0] for t in round_trace(b, n, seed, rounds, threshold, always, True)]


def transition_histogram(b: int, n: int, d: int, samples: int, seed: int) -> List[int]:
    """Success counts of one ideal round started with ``d`` deterministic stations on distinct slots."""
    gen = SplitMix64(seed)
    perm = list(range(b))
    hist = [0] * (n + 1)
    for _ in range(samples):
        slots = [0] * n
        # partial Fisher-Yates: stations 0..d-1 take d distinct uniform slots
        for i in range(d):
            j = i + gen.bounded(b - i)
            perm[i], perm[j] = perm[j], perm[i]
            slots[i] = perm[i]
        for i in range(d, n):
            slots[i] = gen.bounded(b)
        occ = [0] * b
        for s in slots:
            occ[s] += 1
        hist[sum(1 for s in slots if occ[s] == 1)] += 1
    return hist


def enumerate_counts(b: int, n: int, det_slots: Sequence[int]) -> List[int]:
    """Histogram of collision-free station counts over all ``b**(n-d)`` random placements."""
    d = len(det_slots)
    m = n - d
    hist = [0] * (n + 1)
    digits = [0] * m
    base_occ = [0] * b
    for s in det_slots:
        base_occ[s] += 1
    while True:
        occ = list(base_occ)
        for s in digits:
            occ[s] += 1
        ok = sum(1 for s in det_slots if occ[s] == 1) + sum(1 for s in digits if occ[s] == 1)
        hist[ok] += 1
        # mixed-radix increment
        pos = 0
        while pos < m:
            digits[pos] += 1
            if digits[pos] < b:
                break
            digits[pos] = 0
            pos += 1
        if pos == m:
            return hist
