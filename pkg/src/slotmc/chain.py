"""Absorption and steady-state analysis of a :class:`TransitionMatrix`."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

from . import linalg
from .config import Number, SystemConfig
from .model import TransitionMatrix

__all__ = [
    "FundamentalMatrix",
    "StateDistribution",
    "fundamental_matrix",
    "expected_steps_to_absorption",
    "expected_steps_vector",
    "stationary_distribution",
    "expected_successes_per_round",
    "residual",
]

RESIDUAL_TOL = 1e-12


class ConsistencyError(ArithmeticError):
    """An identity that must hold for valid input did not."""


@dataclass(frozen=True)
class FundamentalMatrix:
    """``(I - Q)^-1``: expected visits to transient state ``j`` starting from ``i``."""

    entries: Tuple[Tuple[Number, ...], ...]
    config: SystemConfig

    def __getitem__(self, index):
        i, j = index
        return self.entries[i][j]

    @property
    def size(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class StateDistribution:
    probs: Tuple[Number, ...]

    def __post_init__(self):
        if any(p < 0 for p in self.probs):
            raise ValueError("distribution has a negative entry")
        total = sum(self.probs)
        exact = all(isinstance(p, Fraction) for p in self.probs)
        if (exact and total != 1) or (not exact and abs(total - 1) > RESIDUAL_TOL):
            raise ValueError(f"distribution sums to {total}, not 1")

    def __len__(self):
        return len(self.probs)

    def __getitem__(self, i):
        return self.probs[i]

    @classmethod
    def unit(cls, size: int, state: int) -> "StateDistribution":
        return cls(tuple(Fraction(int(i == state)) for i in range(size)))


def fundamental_matrix(matrix: TransitionMatrix) -> FundamentalMatrix:
    if matrix.config.error_prob != 0 or not matrix.absorbing:
        raise ValueError("fundamental matrix requires an absorbing (error-free) chain")
    q = matrix.transient_block()
    n = len(q)
    i_minus_q = [[int(i == j) - q[i][j] for j in range(n)] for i in range(n)]
    try:
        inv = linalg.inverse(i_minus_q)
    except linalg.SingularMatrixError as exc:
        raise ConsistencyError("I - Q is singular; absorbing state unreachable") from exc
    if matrix.exact and linalg.matmul(i_minus_q, inv) != linalg.identity(n):
        raise ConsistencyError("(I - Q) N != I")
    return FundamentalMatrix(tuple(tuple(row) for row in inv), matrix.config)


def expected_steps_to_absorption(fm: FundamentalMatrix, start: int = 0) -> Number:
    """Expected number of rounds until every station succeeds, from state ``start``.

    ``start == N`` is already absorbed and gives 0.
    """
    n = fm.size
    if start == n:
        return Fraction(0)
    if not 0 <= start < n:
        raise ValueError(f"start state must satisfy 0 <= start <= N={n}, got {start}")
    return sum(fm.entries[start], Fraction(0))


def expected_steps_vector(fm: FundamentalMatrix) -> Tuple[Number, ...]:
    return tuple(expected_steps_to_absorption(fm, s) for s in range(fm.size + 1))


def residual(pi: Sequence[Number], matrix: TransitionMatrix) -> float:
    """Max-norm of ``pi P - pi``."""
    size = matrix.size
    return max(
        abs(float(sum(pi[i] * matrix.entries[i][j] for i in range(size)) - pi[j])) for j in range(size)
    )


def stationary_distribution(matrix: TransitionMatrix, allow_absorbing: bool = False) -> StateDistribution:
    """Unique ``pi`` with ``pi P = pi`` for an error channel with 0 < eps < 1.

    With ``allow_absorbing=True`` an error-free chain returns unit mass on S_N.
    """
    eps = matrix.config.error_prob
    size = matrix.size
    if eps == 0:
        if not allow_absorbing:
            raise ValueError("error-free chain is absorbing; use absorption analysis or allow_absorbing=True")
        return StateDistribution.unit(size, size - 1)
    if not 0 < eps < 1:
        raise ValueError(f"stationary distribution requires 0 < eps < 1, got {eps}")
    # pi (P - I) = 0 with the last balance equation replaced by sum(pi) = 1
    a = [[matrix.entries[j][i] - int(i == j) for j in range(size)] for i in range(size)]
    a[-1] = [1] * size
    rhs = [0] * (size - 1) + [1]
    if matrix.exact:
        rhs = [Fraction(v) for v in rhs]
        a[-1] = [Fraction(1)] * size
    pi = linalg.solve(a, rhs)
    if not matrix.exact:
        # tiny negative round-off on near-zero states
        pi = [max(p, 0.0) for p in pi]
        total = sum(pi)
        pi = [p / total for p in pi]
    res = residual(pi, matrix)
    if res > RESIDUAL_TOL:
        raise ConsistencyError(f"stationary residual {res:.3e} exceeds {RESIDUAL_TOL}")
    return StateDistribution(tuple(pi))


def expected_successes_per_round(pi: StateDistribution) -> Number:
    """Mean successes per round: entering S_delta means delta stations just succeeded."""
    return sum((delta * p for delta, p in enumerate(pi.probs)), Fraction(0) if isinstance(pi[0], Fraction) else 0.0)
