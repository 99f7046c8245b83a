"""Parameter sweeps reproducing convergence-time and error-channel throughput curves."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .chain import expected_steps_to_absorption, expected_successes_per_round, fundamental_matrix, stationary_distribution
from .config import Number, SystemConfig, parse_epsilon
from .model import build_transition_matrix
from .rng import SWEEP_SALT, substream
from .simulator import DEFAULT_ROUND_CAP, run_batch, run_error_channel

CONVERGENCE_COLUMNS = ("B", "N", "expected_steps_analytic", "mean_steps_sim", "stderr_sim", "runs", "seed")
ERROR_COLUMNS = ("B", "N", "epsilon", "avg_success_analytic", "avg_success_sim", "stderr_sim", "rounds", "seed")
MODES = ("analytic", "simulate", "both")


@dataclass(frozen=True)
class SweepSpec:
    slots: Sequence[int]
    stations: Sequence[int]
    epsilon: Number = Fraction(0)
    mode: str = "both"
    runs: int = 10_000
    rounds: int = 10_000
    seed: int = 0
    round_cap: int = DEFAULT_ROUND_CAP

    def __post_init__(self):
        if not self.slots:
            raise ValueError("no slot counts given")
        if not self.stations:
            raise ValueError("empty station range")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        object.__setattr__(self, "epsilon", parse_epsilon(self.epsilon))

    @property
    def columns(self):
        return CONVERGENCE_COLUMNS if self.epsilon == 0 else ERROR_COLUMNS

    def points(self):
        return sorted((b, n) for b in set(self.slots) for n in set(self.stations))


def point_seed(base_seed: int, b: int, n: int) -> int:
    """Seed for one sweep point; pass it to ``simulate --seed`` to reproduce the point."""
    return substream(base_seed ^ SWEEP_SALT, (b << 20) | n)


def _analytic(config: SystemConfig) -> Optional[Number]:
    if not config.feasible:
        return None
    matrix = build_transition_matrix(config)
    if config.error_prob == 0:
        return expected_steps_to_absorption(fundamental_matrix(matrix), 0)
    return expected_successes_per_round(stationary_distribution(matrix))


def sweep_point(spec: SweepSpec, b: int, n: int) -> Dict[str, object]:
    config = SystemConfig(b, n, spec.epsilon)
    seed = point_seed(spec.seed, b, n)
    analytic = _analytic(config) if spec.mode in ("analytic", "both") else None
    mean = stderr = None
    if spec.mode in ("simulate", "both"):
        if spec.epsilon == 0:
            result = run_batch(config, base_seed=seed, count=spec.runs, round_cap=spec.round_cap)
        else:
            result = run_error_channel(config, seed, spec.rounds)
        mean, stderr = result.mean, result.stderr
    row = {"B": b, "N": n, "feasible": config.feasible}
    if spec.epsilon == 0:
        row.update(expected_steps_analytic=analytic, mean_steps_sim=mean, stderr_sim=stderr, runs=spec.runs)
    else:
        row.update(epsilon=spec.epsilon, avg_success_analytic=analytic, avg_success_sim=mean,
                   stderr_sim=stderr, rounds=spec.rounds)
    row["seed"] = seed
    return row


def run_sweep(spec: SweepSpec, jobs: int = 1) -> List[Dict[str, object]]:
    """All sweep rows, ordered by (B, N) independently of completion order."""
    points = spec.points()
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(lambda p: sweep_point(spec, *p), points))
    return [sweep_point(spec, b, n) for b, n in points]
