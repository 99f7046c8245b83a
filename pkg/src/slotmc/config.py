"""Shared configuration and error types."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[Fraction, float]


class InfeasibleError(ValueError):
    """Raised when an analytic quantity is requested for more stations than slots."""


def parse_epsilon(value) -> Number:
    """Turn user input into an error probability.

    Fraction strings ("1/10") and integer strings become exact ``Fraction``
    values. Anything else with a decimal point or exponent is parsed as a
    float, in which case downstream results are no longer exact.
    """
    if isinstance(value, Rational):
        eps = Fraction(value)
    elif isinstance(value, float):
        eps = value
    else:
        text = str(value).strip()
        if "/" in text:
            num, den = text.split("/", 1)
            eps = Fraction(int(num), int(den))
        else:
            try:
                eps = Fraction(int(text))
            except ValueError:
                eps = float(text)
    if not 0 <= eps <= 1:
        raise ValueError(f"error probability must lie in [0, 1], got {value!r}")
    return eps


@dataclass(frozen=True)
class SystemConfig:
    """B slots per round, N stations, and the channel error probability."""

    slots_per_round: int
    stations: int
    error_prob: Number = field(default=Fraction(0))

    def __post_init__(self):
        if int(self.slots_per_round) != self.slots_per_round or self.slots_per_round < 1:
            raise ValueError(f"slots_per_round must be a positive integer, got {self.slots_per_round!r}")
        if int(self.stations) != self.stations or self.stations < 1:
            raise ValueError(f"stations must be a positive integer, got {self.stations!r}")
        object.__setattr__(self, "error_prob", parse_epsilon(self.error_prob))

    @property
    def B(self) -> int:
        return self.slots_per_round

    @property
    def N(self) -> int:
        return self.stations

    @property
    def feasible(self) -> bool:
        return self.stations <= self.slots_per_round

    @property
    def exact(self) -> bool:
        return isinstance(self.error_prob, Fraction)

    def require_feasible(self) -> None:
        if not self.feasible:
            raise InfeasibleError(
                f"infeasible: N > B ({self.stations} stations, {self.slots_per_round} slots)"
            )

    def with_error(self, error_prob) -> "SystemConfig":
        return SystemConfig(self.slots_per_round, self.stations, error_prob)
