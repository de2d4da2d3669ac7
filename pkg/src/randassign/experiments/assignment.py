"""Monte Carlo over i.i.d. matrices: expected optimum, exact-minimum oracle, LLN spread."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..distributions import DistributionSpec, quantile, upper_quantile
from ..greedy import greedy_value, sandwich_terms
from ..lap_solver import optimum_value
from .core import (
    ExperimentConfig,
    SummaryStats,
    inverse_square_sum,
    is_standard_exponential,
)
from .streams import run_trials

SOLVER_CELL_LIMIT = 10**7


def _matrix_trials(args, gen, count):
    """Columns: optimum, greedy value, row-maxima sum (the last two only for ``max``)."""
    spec, n, m, objective = args
    out = np.empty((count, 3))
    for k in range(count):
        x = quantile(spec, gen.random((n, m)))
        out[k, 0] = optimum_value(x, objective)
        if objective == "max":
            out[k, 1] = greedy_value(x)
            total = 0.0
            for v in x.max(axis=1):
                total += v
            out[k, 2] = total
        else:
            out[k, 1] = out[k, 2] = math.nan
    return out


def _sandwich_trials(args, gen, count):
    spec, n, m = args
    u = gen.random((count, 2 * n))
    lower, upper = sandwich_terms(spec, n, m, u[:, :n], u[:, n:])
    return np.stack([lower.sum(axis=1), upper.sum(axis=1)], axis=1)


def sample_optima(spec: DistributionSpec, n: int, m: int, *, trials: int, seed: int, point: int,
                  objective: str = "max", workers: int = 1) -> np.ndarray:
    """``(trials, 3)`` array of optimum, greedy and row-maxima sum per trial."""
    if n * m > SOLVER_CELL_LIMIT:
        raise ValueError(f"{n}x{m} exceeds the solver limit of {SOLVER_CELL_LIMIT} cells per trial")
    return run_trials(_matrix_trials, (spec, n, m, objective), seed=seed, point=point,
                      trials=trials, workers=workers)


def sample_sandwich(spec: DistributionSpec, n: int, m: int, *, trials: int, seed: int, point: int,
                    workers: int = 1) -> np.ndarray:
    """``(trials, 2)`` array of the lower and upper sums of independent maxima."""
    return run_trials(_sandwich_trials, (spec, n, m), seed=seed, point=point,
                      trials=trials, workers=workers)


def scale(spec: DistributionSpec, n: int, m: int) -> float:
    """The normaliser ``n * g(1/m)``."""
    return n * upper_quantile(spec, 1.0 / m)


@dataclass(frozen=True)
class ExpectationPoint:
    n: int
    m: int
    scale: float
    optimum: SummaryStats | None
    ratio: float | None
    greedy: SummaryStats | None = None
    row_maxima: SummaryStats | None = None
    lower: SummaryStats | None = None
    upper: SummaryStats | None = None
    chain_violations: int = 0
    bracket_ok: bool | None = None


def estimate_expectation(config: ExperimentConfig) -> list[ExpectationPoint]:
    """Mean optimum per schedule point and its ratio to ``n g(1/m)``.

    ``method="sandwich"`` replaces the solver by the independent-maxima
    bounds; ``"both"`` runs the two and checks that the bounds bracket the
    solver mean within four combined standard errors.
    """
    points = []
    for index, (n, m) in enumerate(config.schedule):
        norm = scale(config.spec, n, m)
        optimum = greedy = rowmax = lower = upper = None
        violations = 0
        if config.method in ("solver", "both"):
            data = sample_optima(config.spec, n, m, trials=config.trials, seed=config.seed,
                                 point=index, workers=config.workers)
            optimum = SummaryStats.of(data[:, 0])
            greedy = SummaryStats.of(data[:, 1])
            rowmax = SummaryStats.of(data[:, 2])
            violations = int(np.sum((data[:, 1] > data[:, 0]) | (data[:, 0] > data[:, 2])))
        if config.method in ("sandwich", "both"):
            sand = sample_sandwich(config.spec, n, m, trials=config.trials, seed=config.seed,
                                   point=index, workers=config.workers)
            lower = SummaryStats.of(sand[:, 0])
            upper = SummaryStats.of(sand[:, 1])
        bracket = None
        if optimum is not None and lower is not None:
            se_lo = math.hypot(optimum.std_error, lower.std_error)
            se_hi = math.hypot(optimum.std_error, upper.std_error)
            bracket = (lower.mean <= optimum.mean + 4 * se_lo) and (optimum.mean <= upper.mean + 4 * se_hi)
        centre = optimum.mean if optimum is not None else None
        ratio = centre / norm if centre is not None and norm != 0 else None
        points.append(ExpectationPoint(n, m, norm, optimum, ratio, greedy, rowmax, lower, upper,
                                       violations, bracket))
    return points


@dataclass(frozen=True)
class MinExpectationPoint:
    n: int
    stats: SummaryStats
    oracle: float | None

    @property
    def z_score(self) -> float | None:
        if self.oracle is None or self.stats.std_error == 0:
            return None
        return (self.stats.mean - self.oracle) / self.stats.std_error


def estimate_min_expectation(config: ExperimentConfig) -> list[MinExpectationPoint]:
    """Mean minimum per point; for exponential(1) square points the exact ``sum k**-2`` is attached."""
    out = []
    for index, (n, m) in enumerate(config.schedule):
        data = sample_optima(config.spec, n, m, trials=config.trials, seed=config.seed,
                             point=index, objective="min", workers=config.workers)
        oracle = inverse_square_sum(n) if is_standard_exponential(config.spec) and n == m else None
        out.append(MinExpectationPoint(n, SummaryStats.of(data[:, 0]), oracle))
    return out


@dataclass(frozen=True)
class LLNPoint:
    n: int
    m: int
    band: float
    exceed_fraction: float
    ratio_mean: float
    ratio_std: float
    ratio_min: float
    ratio_max: float


def lln_report(config: ExperimentConfig, band: float = 0.1) -> list[LLNPoint]:
    """Spread of ``M_{n,m} / (n g(1/m))`` and the share of trials outside ``1 +- band``."""
    out = []
    for index, (n, m) in enumerate(config.schedule):
        norm = scale(config.spec, n, m)
        values = sample_optima(config.spec, n, m, trials=config.trials, seed=config.seed,
                               point=index, workers=config.workers)[:, 0]
        ratio = values / norm
        std = float(ratio.std(ddof=1)) if ratio.size > 1 else 0.0
        out.append(LLNPoint(n, m, band, float(np.mean(np.abs(ratio - 1.0) > band)), float(ratio.mean()),
                            std, float(ratio.min()), float(ratio.max())))
    return out
