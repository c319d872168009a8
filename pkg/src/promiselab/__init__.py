"""Failure probabilities of three deciders for the balanced-or-constant problem
when the promise is weakened by y bit flips."""

from .classical import SamplingModel, classical_failure
from .crossover import solve_crossover_dj_classical, solve_crossover_dj_wvd
from .dj import dj_majority_failure
from .oracle import OracleString, ProblemInstance, PromiseCase, generate_oracle
from .wvd import InferenceRule, error_count_distribution, optimal_alpha, wvd_failure

__version__ = "0.1.0"

__all__ = [
    "InferenceRule",
    "OracleString",
    "ProblemInstance",
    "PromiseCase",
    "SamplingModel",
    "classical_failure",
    "dj_majority_failure",
    "error_count_distribution",
    "generate_oracle",
    "optimal_alpha",
    "solve_crossover_dj_classical",
    "solve_crossover_dj_wvd",
    "wvd_failure",
]
