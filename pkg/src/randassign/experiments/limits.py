"""Convergence of single-sequence maxima: centred cumulants, means, moments and laws."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from ..distributions import (
    DistributionSpec,
    classify_exp_type,
    in_gumbel_domain,
    mean_residual_h,
    norming_constants,
    upper_quantile,
)
from ..evt import EULER_GAMMA, frechet_moment, gumbel_cdf, gumbel_cgf, weibull_moment
from .core import SummaryStats, bootstrap_se, exact_max_mean
from .streams import BOOTSTRAP_OFFSET, PREPASS_OFFSET, run_trials
from .tails import sample_maxima

CUMULANT_T_LIMIT = 0.4
PREPASS_DRAWS = 10**7


# ------------------------------------------------------ centred cumulants


@dataclass(frozen=True)
class CumulantCheck:
    n: int
    t: float
    log_mgf_hat: float
    target: float
    std_error: float | None
    mean: float
    mean_exact: bool

    @property
    def gap(self) -> float:
        return abs(self.log_mgf_hat - self.target)


def max_mean(spec: DistributionSpec, n: int, *, seed: int = 0, workers: int = 1,
             draws: int = PREPASS_DRAWS) -> tuple[float, bool]:
    """``E M_n``: closed form where known, else a Monte Carlo pre-pass on its own stream."""
    exact = exact_max_mean(spec, n)
    if exact is not None:
        return exact, True
    values = sample_maxima(spec, n, draws=draws, seed=seed, point=PREPASS_OFFSET, workers=workers)
    return math.fsum(values) / values.size, False


def cumulant_convergence_check(spec: DistributionSpec, n: int, t: float, trials: int, *,
                               seed: int = 0, workers: int = 1) -> CumulantCheck:
    """``log E exp(t (M_n - E M_n) / c)`` against the centred Gumbel cumulant at ``t``.

    ``|t|`` is capped at 0.4: the plain estimator's second moment involves
    ``Gamma(1 - 2t)`` and blows up as ``t`` approaches 1/2.
    """
    if abs(t) > CUMULANT_T_LIMIT:
        raise ValueError(f"|t| must be <= {CUMULANT_T_LIMIT}")
    c = classify_exp_type(spec)
    if c is None:
        raise ValueError(f"{spec} has no known exponential-type parameter")
    mean, exact = max_mean(spec, n, seed=seed, workers=workers)
    target = gumbel_cgf(t)
    if t == 0:
        return CumulantCheck(n, 0.0, 0.0, 0.0, 0.0, mean, exact)
    centred = (sample_maxima(spec, n, draws=trials, seed=seed, workers=workers) - mean) / c
    weights = np.exp(t * centred)
    log_mgf = math.log(weights.mean())
    rng = np.random.Generator(np.random.Philox(key=seed, counter=BOOTSTRAP_OFFSET << 192))
    se = bootstrap_se(weights, lambda w: math.log(w.mean()), rng)
    return CumulantCheck(n, float(t), log_mgf, float(target), se, mean, exact)


# ----------------------------------------------------------- centred means


@dataclass(frozen=True)
class LimitPoint:
    n: int
    value: float
    gap: float
    std_error: float
    exact: bool


def expectation_limit_check(spec: DistributionSpec, schedule_n, *, trials: int = 10**5,
                            seed: int = 0, workers: int = 1) -> list[LimitPoint]:
    """``E (M_n - g(1/n)) / c`` per ``n`` and its distance to Euler's constant."""
    c = classify_exp_type(spec)
    if c is None:
        raise ValueError(f"{spec} has no known exponential-type parameter")
    out = []
    for index, n in enumerate(schedule_n):
        g = upper_quantile(spec, 1.0 / n)
        exact = exact_max_mean(spec, n)
        if exact is not None:
            value, se = (exact - g) / c, 0.0
        else:
            draws = sample_maxima(spec, n, draws=trials, seed=seed, point=index, workers=workers)
            summary = SummaryStats.of((draws - g) / c)
            value, se = summary.mean, summary.std_error
        out.append(LimitPoint(int(n), value, abs(value - EULER_GAMMA), se, exact is not None))
    return out


# --------------------------------------------------------- scaled moments


@dataclass(frozen=True)
class MomentPoint:
    n: int
    moment: float
    moment_std_error: float
    target: float
    gap: float
    gap_std_error: float


def _scaled_maxima(spec: DistributionSpec, alpha: float, n: int, u: np.ndarray):
    """``(v_n, v_lim)`` coupled through the same uniform.

    ``v_n`` is ``M_n / a_n`` (Frechet domain) or ``(x0 - M_n) / a_n`` (Weibull
    domain), and ``v_lim`` the limit variate that the same ``u`` produces.
    """
    with np.errstate(divide="ignore"):
        y = -np.log(u)
        p = np.where(u > 0, -np.expm1(np.log(u) / n), 1.0)
    p = np.maximum(p, np.finfo(float).tiny)
    fam, a = spec.family, spec.params
    if fam == "pareto":
        return upper_quantile(spec, p) / n ** (1.0 / alpha), y ** (-1.0 / alpha)
    if fam == "uniform":
        return (a[1] - upper_quantile(spec, p)) * n / (a[1] - a[0]), y ** (1.0 / alpha)
    # weibull_neg: x0 = 0, a_n = n**(-1/alpha)
    return -upper_quantile(spec, p) * n ** (1.0 / alpha), y ** (1.0 / alpha)


def _moment_trials(args, gen, count):
    spec, alpha, k, n = args
    v, v_lim = _scaled_maxima(spec, alpha, n, gen.random(count))
    vk, limk = v ** k, v_lim ** k
    return np.stack([vk, vk - limk], axis=1)


def moment_convergence_check(spec: DistributionSpec, alpha: float, k: float, schedule_n,
                             trials: int, *, seed: int = 0, workers: int = 1) -> list[MomentPoint]:
    """``E v_n^k`` against its extreme-value limit along ``schedule_n``.

    ``pareto(alpha)`` uses ``v_n = M_n / n^(1/alpha)`` and the target
    ``Gamma(1 - k/alpha)``. ``uniform(a, b)`` (``alpha = 1``) and
    ``weibull_neg(alpha)`` use ``v_n = (x0 - M_n) / a_n`` and ``Gamma(1 + k/alpha)``.

    The gap ``E v_n^k - target`` is estimated as the mean of ``v_n^k - v^k``
    where ``v`` is the limit variate driven by the same uniform. That
    difference has far smaller spread than ``v_n^k`` itself, so the gap
    trend is resolved even where the plain moment estimate is noisy.
    """
    fam = spec.family
    if fam == "pareto":
        if spec.params[0] != alpha:
            raise ValueError("alpha must equal the pareto shape")
        if not 0 < k < alpha:
            raise ValueError("k must satisfy 0 < k < alpha")
        target = frechet_moment(alpha, k)
    elif fam == "uniform":
        if alpha != 1:
            raise ValueError("uniform maxima have Weibull index alpha = 1")
        target = weibull_moment(1.0, k)
    elif fam == "weibull_neg":
        if spec.params[0] != alpha:
            raise ValueError("alpha must equal the weibull_neg shape")
        target = weibull_moment(alpha, k)
    else:
        raise ValueError(f"moment check supports pareto, uniform and weibull_neg, not {fam}")
    out = []
    for index, n in enumerate(schedule_n):
        data = run_trials(_moment_trials, (spec, alpha, k, int(n)), seed=seed, point=index,
                          trials=trials, workers=workers)
        moment = SummaryStats.of(data[:, 0])
        gap = SummaryStats.of(data[:, 1])
        out.append(MomentPoint(int(n), moment.mean, moment.std_error, target, gap.mean, gap.std_error))
    return out


# ----------------------------------------------------- law of the maximum


@dataclass(frozen=True)
class FTGCheck:
    n: int
    b_n: float
    a_n: float
    ks: float
    p_value: float
    trials: int


def ftg_convergence_check(spec: DistributionSpec, n: int, trials: int, *, seed: int = 0,
                          workers: int = 1) -> FTGCheck:
    """Kolmogorov-Smirnov distance of ``(M_n - b_n) / a_n`` to the standard Gumbel law.

    Norming is ``b_n = g(1/n)``, ``a_n = h(b_n)``, except for the Gumbel family
    itself where the exact max-stable constants are used.
    """
    if not in_gumbel_domain(spec):
        raise ValueError(f"{spec} is not flagged as satisfying the Gumbel-domain condition")
    if n == 1:
        # negative control: M_1 is a single draw
        b = upper_quantile(spec, 1.0)
        if not math.isfinite(b):
            raise ValueError(f"g(1) is infinite for {spec}; use n >= 2")
        a = mean_residual_h(spec, b)
    elif spec.family == "gumbel":
        # max-stability: M_n - scale * ln n is Gumbel(loc, scale) exactly
        loc, scale = spec.params
        b, a = loc + scale * math.log(n), scale
    else:
        norming = norming_constants(spec, n)
        b, a = norming.b_n, norming.a_n
    z = (sample_maxima(spec, n, draws=trials, seed=seed, workers=workers) - b) / a
    result = stats.kstest(z, gumbel_cdf)
    return FTGCheck(int(n), float(b), float(a), float(result.statistic), float(result.pvalue), trials)
