"""Monte Carlo simulation of the slot-assignment protocol.

Every station transmits once per round. A station whose last transmission
succeeded reuses its slot; every other station draws a slot uniformly at
random. Under an error channel each collision-free transmission also fails
independently with probability ``eps``, and the station cannot tell that
apart from a collision.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ._backend import BACKEND, CAP_EXCEEDED, kernels
from ._purepy import round_trace
from .config import SystemConfig
from .rng import batch_seeds, error_threshold

DEFAULT_ROUND_CAP = 10**6
STDERR_BATCHES = 50


class Mode(str, Enum):
    RANDOM = "random"
    DETERMINISTIC = "deterministic"


@dataclass(frozen=True)
class StationState:
    slot_choice: int  # 1..B
    mode: Mode


@dataclass(frozen=True)
class RoundOutcome:
    round_index: int
    successes: int
    per_station: Tuple[bool, ...]
    collided: int
    errored: int
    stations: Tuple[StationState, ...]


@dataclass(frozen=True)
class SimulationResult:
    """Aggregate statistics of a batch of convergence runs or of one error-channel trace.

    For convergence batches ``samples`` holds the convergence round of every
    run (``None`` for runs that hit the cap) and the moments are over
    completed runs only. For error-channel runs ``samples`` is the
    per-round success trace and ``stderr`` uses batch means, since
    consecutive rounds are correlated.
    """

    config: SystemConfig
    mode: str  # "convergence" or "error"
    samples: Tuple[Optional[int], ...]
    mean: Optional[float]
    std: Optional[float]
    stderr: Optional[float]
    capped: int = 0
    histogram: Dict[int, int] = field(default_factory=dict)
    seed: Optional[int] = None
    backend: str = BACKEND

    @property
    def runs(self) -> int:
        return len(self.samples) if self.mode == "convergence" else 1

    @property
    def rounds(self) -> Optional[int]:
        return len(self.samples) if self.mode == "error" else None

    @property
    def completed(self) -> int:
        return len(self.samples) - self.capped


def _moments(values: Sequence[float]):
    n = len(values)
    if n == 0:
        return None, None, None
    mean = math.fsum(values) / n
    if n < 2:
        return mean, None, None
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    std = math.sqrt(var)
    return mean, std, std / math.sqrt(n)


def batch_means_stderr(values: Sequence[float], batches: int = STDERR_BATCHES) -> Optional[float]:
    """Standard error of the mean of a correlated series via non-overlapping batch means."""
    n = len(values)
    batches = min(batches, n // 2)
    if batches < 2:
        return None
    size = n // batches
    offset = n - size * batches  # drop the earliest rounds
    means = [math.fsum(values[offset + b * size: offset + (b + 1) * size]) / size for b in range(batches)]
    return _moments(means)[2]


def run_convergence(config: SystemConfig, seed: int, round_cap: int = DEFAULT_ROUND_CAP) -> Optional[int]:
    """1-based index of the first round in which every station succeeds, or ``None`` past ``round_cap``.

    Configurations with more stations than slots never converge and return
    ``None`` without simulating.
    """
    if config.error_prob != 0:
        raise ValueError("convergence runs require an error-free channel")
    if round_cap < 1:
        raise ValueError("round_cap must be positive")
    r = kernels.convergence_rounds(config.B, config.N, [seed], round_cap)[0]
    return None if r == CAP_EXCEEDED else r


def run_batch(
    config: SystemConfig,
    seeds: Optional[Sequence[int]] = None,
    *,
    base_seed: int = 0,
    count: Optional[int] = None,
    round_cap: int = DEFAULT_ROUND_CAP,
    jobs: int = 1,
) -> SimulationResult:
    """Independent convergence runs, one per seed (or ``count`` seeds derived from ``base_seed``)."""
    if config.error_prob != 0:
        raise ValueError("convergence runs require an error-free channel")
    if seeds is None:
        if count is None or count < 1:
            raise ValueError("count must be >= 1")
        seeds = batch_seeds(base_seed, count)
    seeds = list(seeds)
    if not seeds:
        raise ValueError("at least one seed is required")
    if jobs > 1 and len(seeds) > jobs:
        chunk = math.ceil(len(seeds) / jobs)
        parts = [seeds[i:i + chunk] for i in range(0, len(seeds), chunk)]
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            raw = [r for part in pool.map(
                lambda p: kernels.convergence_rounds(config.B, config.N, p, round_cap), parts) for r in part]
    else:
        raw = kernels.convergence_rounds(config.B, config.N, seeds, round_cap)
    samples = tuple(None if r == CAP_EXCEEDED else int(r) for r in raw)
    done = [s for s in samples if s is not None]
    mean, std, stderr = _moments(done)
    return SimulationResult(
        config=config,
        mode="convergence",
        samples=samples,
        mean=mean,
        std=std,
        stderr=stderr,
        capped=len(samples) - len(done),
        histogram=dict(sorted(Counter(done).items())),
        seed=base_seed if count is not None else None,
    )


def run_error_channel(config: SystemConfig, seed: int, rounds: int) -> SimulationResult:
    """Simulate ``rounds`` rounds from a cold start and report the success-count trace."""
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    threshold, always = error_threshold(config.error_prob)
    trace = tuple(int(s) for s in kernels.error_trace(config.B, config.N, seed, rounds, threshold, always))
    mean, std, _ = _moments(trace)
    return SimulationResult(
        config=config,
        mode="error",
        samples=trace,
        mean=mean,
        std=std,
        stderr=batch_means_stderr(trace),
        histogram=dict(sorted(Counter(trace).items())),
        seed=seed,
    )


def iter_rounds(config: SystemConfig, seed: int, rounds: int) -> Iterator[RoundOutcome]:
    """Round-by-round outcomes with per-station detail (pure Python, same draws as the kernels)."""
    threshold, always = error_threshold(config.error_prob)
    use_errors = config.error_prob != 0
    trace = round_trace(config.B, config.N, seed, rounds, threshold, always, use_errors)
    for index, (succ, coll, err, slots, det) in enumerate(trace, start=1):
        yield RoundOutcome(
            round_index=index,
            successes=succ,
            per_station=det,
            collided=coll,
            errored=err,
            stations=tuple(
                StationState(s + 1, Mode.DETERMINISTIC if ok else Mode.RANDOM) for s, ok in zip(slots, det)
            ),
        )


def sample_transitions(config: SystemConfig, d: int, samples: int, seed: int) -> List[int]:
    """Histogram of next-round success counts from ``d`` deterministic stations on distinct slots."""
    if not 0 <= d <= config.N or d > config.B:
        raise ValueError(f"cannot place {d} deterministic stations")
    return [int(c) for c in kernels.transition_histogram(config.B, config.N, d, samples, seed)]
