"""Convergence analysis of decentralized collision-free slot assignment.

Stations pick a slot per round; a station that succeeded keeps its slot,
the others redraw uniformly. The chain over "number of stations that
succeeded last round" is analysed exactly, and a seeded simulator
cross-checks it.
"""
from ._backend import BACKEND
from .chain import (FundamentalMatrix, StateDistribution, expected_steps_to_absorption,
                    expected_successes_per_round, fundamental_matrix, stationary_distribution)
from .config import InfeasibleError, SystemConfig, parse_epsilon
from .model import (TransitionMatrix, apply_channel_error, build_transition_matrix, intersection_success_prob,
                    s_term, transition_prob)
from .oracle import ExactDistribution, enumerate_error_transition, enumerate_transition
from .simulator import (RoundOutcome, SimulationResult, StationState, iter_rounds, run_batch, run_convergence,
                        run_error_channel, sample_transitions)

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "SystemConfig", "InfeasibleError", "parse_epsilon",
    "TransitionMatrix", "intersection_success_prob", "s_term", "transition_prob",
    "build_transition_matrix", "apply_channel_error",
    "FundamentalMatrix", "StateDistribution", "fundamental_matrix", "expected_steps_to_absorption",
    "stationary_distribution", "expected_successes_per_round",
    "ExactDistribution", "enumerate_transition", "enumerate_error_transition",
    "StationState", "RoundOutcome", "SimulationResult",
    "run_convergence", "run_batch", "run_error_channel", "iter_rounds", "sample_transitions",
]
