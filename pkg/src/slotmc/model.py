"""Exact transition probabilities of the slot-assignment Markov chain.

State ``d`` means ``d`` stations succeeded in the previous round and reuse
their slot; the other ``N - d`` stations pick a slot uniformly at random.
The probability of ``delta`` successes in the next round is obtained by
inclusion-exclusion over the events "station i succeeds".
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import List, Sequence, Tuple

from .config import Number, SystemConfig, parse_epsilon

__all__ = [
    "TransitionMatrix",
    "intersection_success_prob",
    "s_term",
    "transition_prob",
    "transition_row",
    "build_transition_matrix",
    "apply_channel_error",
]


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return factorial(n)


@lru_cache(maxsize=None)
def _binom(n: int, k: int) -> int:
    return comb(n, k)


def _check_state(config: SystemConfig, d: int) -> None:
    config.require_feasible()
    if not 0 <= d < config.stations:
        raise ValueError(f"state index must satisfy 0 <= d < N={config.stations}, got d={d}")


def _k_range(n: int, d: int, j: int) -> range:
    # k tagged stations are deterministic, j - k are random
    return range(max(0, j + d - n), min(d, j) + 1)


def _intersection(b: int, n: int, d: int, j: int, k: int) -> Fraction:
    r = j - k
    if j == n:
        return Fraction(_fact(b - d), _fact(b - n) * b ** (n - d))
    # (b - j) ** 0 == 1 covers the case with no untagged random stations
    return Fraction(_fact(b - d) * (b - j) ** (n - d - r), _fact(b - d - r) * b ** (n - d))


def intersection_success_prob(config: SystemConfig, d: int, j: int, k: int) -> Fraction:
    """Probability that a fixed set of ``j`` stations, ``k`` of them deterministic, all succeed."""
    _check_state(config, d)
    n = config.stations
    if not 1 <= j <= n:
        raise ValueError(f"tagged-set size must satisfy 1 <= j <= N={n}, got j={j}")
    if k not in _k_range(n, d, j):
        raise ValueError(
            f"k={k} outside [max(0, j+d-N), min(d, j)] = "
            f"[{max(0, j + d - n)}, {min(d, j)}] for d={d}, j={j}, N={n}"
        )
    return _intersection(config.slots_per_round, n, d, j, k)


@lru_cache(maxsize=4096)
def _s_terms(b: int, n: int, d: int) -> Tuple[Fraction, ...]:
    out = []
    for j in range(n + 1):
        if j == n:
            out.append(_intersection(b, n, d, n, d))
            continue
        total = Fraction(0)
        for k in _k_range(n, d, j):
            total += _binom(d, k) * _binom(n - d, j - k) * _intersection(b, n, d, j, k)
        out.append(total)
    return tuple(out)


def s_term(config: SystemConfig, d: int, j: int) -> Fraction:
    """Sum over all ``j``-subsets of stations of the probability that the whole subset succeeds.

    Not a probability itself; ``s_term(config, d, 0) == 1``.
    """
    _check_state(config, d)
    if not 0 <= j <= config.stations:
        raise ValueError(f"subset size must satisfy 0 <= j <= N={config.stations}, got j={j}")
    return _s_terms(config.slots_per_round, config.stations, d)[j]


@lru_cache(maxsize=4096)
def _row(b: int, n: int, d: int) -> Tuple[Fraction, ...]:
    if d == n:
        return tuple(Fraction(int(delta == n)) for delta in range(n + 1))
    s = _s_terms(b, n, d)
    row = []
    for delta in range(n + 1):
        total = Fraction(0)
        for j in range(delta, n + 1):
            term = _binom(j, delta) * s[j]
            total += term if (j + delta) % 2 == 0 else -term
        row.append(total)
    return tuple(row)


def transition_prob(config: SystemConfig, d: int, delta: int) -> Fraction:
    """Exact probability of moving from state ``d`` to state ``delta`` on an ideal channel."""
    config.require_feasible()
    n = config.stations
    if not 0 <= d <= n:
        raise ValueError(f"origin state must satisfy 0 <= d <= N={n}, got {d}")
    if not 0 <= delta <= n:
        raise ValueError(f"destination state must satisfy 0 <= delta <= N={n}, got {delta}")
    return _row(config.slots_per_round, n, d)[delta]


def transition_row(config: SystemConfig, d: int) -> Tuple[Fraction, ...]:
    config.require_feasible()
    if not 0 <= d <= config.stations:
        raise ValueError(f"origin state must satisfy 0 <= d <= N={config.stations}, got {d}")
    return _row(config.slots_per_round, config.stations, d)


@dataclass(frozen=True)
class TransitionMatrix:
    """Row-stochastic (N+1)x(N+1) matrix over states S_0..S_N.

    Entries are ``Fraction`` when the error probability is exact, floats
    otherwise.
    """

    entries: Tuple[Tuple[Number, ...], ...]
    config: SystemConfig

    def __post_init__(self):
        size = self.config.stations + 1
        if len(self.entries) != size or any(len(row) != size for row in self.entries):
            raise ValueError(f"transition matrix must be {size}x{size}")
        for d, row in enumerate(self.entries):
            if any(p < 0 for p in row):
                raise ValueError(f"row {d} has a negative entry")
            total = sum(row)
            if self.exact:
                if total != 1:
                    raise ValueError(f"row {d} sums to {total}, not 1")
            elif abs(total - 1) > 1e-12:
                raise ValueError(f"row {d} sums to {total!r}, not 1")

    @property
    def size(self) -> int:
        return len(self.entries)

    @property
    def exact(self) -> bool:
        return all(isinstance(p, Fraction) for row in self.entries for p in row)

    @property
    def absorbing(self) -> bool:
        n = self.config.stations
        return all(self.entries[n][delta] == (1 if delta == n else 0) for delta in range(n + 1))

    def __getitem__(self, index):
        d, delta = index
        return self.entries[d][delta]

    def row(self, d: int) -> Tuple[Number, ...]:
        return self.entries[d]

    def transient_block(self) -> List[List[Number]]:
        """The top-left N x N block (transitions among transient states)."""
        n = self.config.stations
        return [list(self.entries[d][:n]) for d in range(n)]

    def to_floats(self) -> List[List[float]]:
        return [[float(p) for p in row] for row in self.entries]


def build_transition_matrix(config: SystemConfig) -> TransitionMatrix:
    """Assemble the full matrix for ``config``.

    A nonzero ``config.error_prob`` is applied on top of the ideal matrix.
    """
    config.require_feasible()
    b, n = config.slots_per_round, config.stations
    ideal = TransitionMatrix(tuple(_row(b, n, d) for d in range(n + 1)), config.with_error(0))
    if config.error_prob == 0:
        return ideal
    return apply_channel_error(ideal, config.error_prob)


def _thin(row: Sequence[Number], eps: Number) -> Tuple[Number, ...]:
    n = len(row) - 1
    keep = 1 - eps
    if not isinstance(eps, Fraction):
        row = [float(p) for p in row]
    out = []
    for delta in range(n + 1):
        total = 0
        for i in range(delta, n + 1):
            if row[i]:
                total += _binom(i, delta) * eps ** (i - delta) * keep ** delta * row[i]
        out.append(Fraction(total) if isinstance(eps, Fraction) else float(total))
    return tuple(out)


def apply_channel_error(matrix: TransitionMatrix, epsilon) -> TransitionMatrix:
    """Transitions when each collision-free transmission independently fails with ``epsilon``.

    A station that collided or suffered an error cannot tell the two apart, so
    ``delta`` successes arise from ``i >= delta`` collision-free stations of
    which ``i - delta`` were hit by the error.
    """
    eps = parse_epsilon(epsilon)
    if matrix.config.error_prob != 0:
        raise ValueError("channel error must be applied to an ideal-channel matrix")
    entries = tuple(_thin(row, eps) for row in matrix.entries)
    return TransitionMatrix(entries, matrix.config.with_error(eps))
