"""Seed-deterministic Monte Carlo checks of the assignment and extreme-value asymptotics."""

from .assignment import (
    ExpectationPoint,
    LLNPoint,
    MinExpectationPoint,
    estimate_expectation,
    estimate_min_expectation,
    lln_report,
    sample_optima,
    sample_sandwich,
)
from .core import ExperimentConfig, Report, SummaryStats, TailEstimate
from .limits import (
    CumulantCheck,
    FTGCheck,
    LimitPoint,
    MomentPoint,
    cumulant_convergence_check,
    expectation_limit_check,
    ftg_convergence_check,
    moment_convergence_check,
)
from .reports import KINDS, ParameterError, build_report
from .streams import BLOCK_TRIALS, fresh_seed, run_trials
from .tails import (
    Lemma2Cell,
    cramer_is_estimate,
    ldp_tail_estimate,
    lemma2_bound_check,
    plain_gumbel_tail_estimate,
)

__all__ = [
    "BLOCK_TRIALS",
    "CumulantCheck",
    "ExpectationPoint",
    "ExperimentConfig",
    "FTGCheck",
    "KINDS",
    "LLNPoint",
    "Lemma2Cell",
    "LimitPoint",
    "MinExpectationPoint",
    "MomentPoint",
    "ParameterError",
    "Report",
    "SummaryStats",
    "TailEstimate",
    "build_report",
    "cramer_is_estimate",
    "cumulant_convergence_check",
    "estimate_expectation",
    "estimate_min_expectation",
    "expectation_limit_check",
    "fresh_seed",
    "ftg_convergence_check",
    "ldp_tail_estimate",
    "lemma2_bound_check",
    "lln_report",
    "moment_convergence_check",
    "plain_gumbel_tail_estimate",
    "run_trials",
    "sample_optima",
    "sample_sandwich",
]
