"""Exhaustive enumeration of slot assignments, as ground truth for the closed forms.

Shares no code with :mod:`slotmc.model`: it places the deterministic
stations, walks every assignment of the random stations, and counts.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence, Tuple

from ._backend import kernels
from .config import InfeasibleError, parse_epsilon

ENUMERATION_BUDGET = 10**7


class BudgetExceededError(ValueError):
    pass


@dataclass(frozen=True)
class ExactDistribution:
    probs: Tuple[Fraction, ...]
    total_outcomes: int

    def __post_init__(self):
        if sum(self.probs) != 1:
            raise ValueError("distribution does not sum to 1")

    def __getitem__(self, delta):
        return self.probs[delta]

    def __len__(self):
        return len(self.probs)


def _check(b: int, n: int, d: int) -> int:
    if n > b:
        raise InfeasibleError(f"infeasible: N > B ({n} stations, {b} slots)")
    if not 0 <= d < n:
        raise ValueError(f"state index must satisfy 0 <= d < N={n}, got {d}")
    outcomes = b ** (n - d)
    if outcomes > ENUMERATION_BUDGET:
        raise BudgetExceededError(
            f"B^(N-d) = {b}^{n - d} = {outcomes} exceeds the enumeration budget of {ENUMERATION_BUDGET}"
        )
    return outcomes


def collision_free_counts(b: int, n: int, d: int, det_slots: Optional[Sequence[int]] = None) -> Tuple[int, ...]:
    """Number of assignments with exactly ``i`` collision-free stations, for i = 0..N.

    ``det_slots`` are 0-based distinct slots of the deterministic stations
    (default ``0..d-1``).
    """
    _check(b, n, d)
    if det_slots is None:
        det_slots = range(d)
    det_slots = list(det_slots)
    if len(det_slots) != d or len(set(det_slots)) != d or not all(0 <= s < b for s in det_slots):
        raise ValueError("deterministic stations need d distinct slots in [0, B)")
    return tuple(int(c) for c in kernels.enumerate_counts(b, n, det_slots))


def enumerate_transition(b: int, n: int, d: int, det_slots: Optional[Sequence[int]] = None) -> ExactDistribution:
    """Exact distribution of the next-round success count from state ``d`` by enumeration."""
    total = _check(b, n, d)
    counts = collision_free_counts(b, n, d, det_slots)
    return ExactDistribution(tuple(Fraction(c, total) for c in counts), total)


def enumerate_error_transition(b: int, n: int, d: int, epsilon, det_slots=None) -> ExactDistribution:
    """As :func:`enumerate_transition`, with each collision-free station then failing w.p. ``epsilon``."""
    eps = parse_epsilon(epsilon)
    if not isinstance(eps, Fraction):
        raise ValueError("the oracle needs an exact rational epsilon")
    total = _check(b, n, d)
    counts = collision_free_counts(b, n, d, det_slots)
    probs = [Fraction(0)] * (n + 1)
    for i, c in enumerate(counts):
        if not c:
            continue
        # each of the i collision-free stations survives independently w.p. 1 - eps
        for delta in range(i + 1):
            probs[delta] += Fraction(c, total) * comb(i, delta) * eps ** (i - delta) * (1 - eps) ** delta
    return ExactDistribution(tuple(probs), total)
