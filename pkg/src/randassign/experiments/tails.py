"""Tail probabilities: polynomial bound on maxima, large deviations of the optimum,
and an exponentially tilted estimator for sums of centred Gumbel variables."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from ..distributions import (
    DistributionSpec,
    classify_exp_type,
    max_quantile,
    negative_part_mean,
    upper_quantile,
)
from ..evt import EULER_GAMMA, epsilon_value, gumbel_cgf, gumbel_rate
from .assignment import sample_optima
from .core import TailEstimate, bootstrap_se
from .streams import BOOTSTRAP_OFFSET, run_trials

SIDES = ("upper_dev", "lower_dev")


# --------------------------------------------------- moment bound on |M_n|


def _max_draws(args, gen, count):
    spec, n = args
    return np.asarray(max_quantile(spec, n, gen.random(count)), dtype=np.float64)


def sample_maxima(spec: DistributionSpec, n: int, *, draws: int, seed: int, point: int = 0,
                  workers: int = 1) -> np.ndarray:
    return run_trials(_max_draws, (spec, n), seed=seed, point=point, trials=draws, workers=workers)


@dataclass(frozen=True)
class Lemma2Cell:
    alpha: float
    threshold: float
    empirical_prob: float
    std_error: float
    bound: float
    c1: float

    @property
    def ok(self) -> bool:
        return self.empirical_prob <= self.bound + 3 * self.std_error


def lemma2_bound(alpha: float, q: int, s: float, neg_mean: float) -> tuple[float, float]:
    """``(C_1, C_1 alpha^{-s/q})`` with ``C_1 alpha^{-s/q} = (alpha^{1/q}/2)^{-s} + (E X^- / alpha^{1/q})^s``."""
    root = alpha ** (1.0 / q)
    bound = (root / 2.0) ** (-s) + (neg_mean / root) ** s
    return float(bound * alpha ** (s / q)), float(bound)


def lemma2_bound_check(spec: DistributionSpec, n: int, q: int, s: float, alphas, *,
                       draws: int = 10**5, seed: int = 0, workers: int = 1) -> list[Lemma2Cell]:
    """Empirical ``P(|M_n|^q >= alpha g(1/n)^q)`` against its closed-form bound."""
    if q < 1 or int(q) != q:
        raise ValueError("q must be a positive integer")
    if s <= 0:
        raise ValueError("s must be > 0")
    if n < s:
        raise ValueError(f"the bound needs n >= s (n={n}, s={s})")
    for alpha in alphas:
        if alpha <= 2 ** q:
            raise ValueError(f"alpha={alpha} must exceed 2**q = {2 ** q}")
    g = upper_quantile(spec, 1.0 / n)
    if g <= 0:
        raise ValueError(f"g(1/n) = {g} must be positive")
    neg_mean = negative_part_mean(spec)
    maxima = np.abs(sample_maxima(spec, n, draws=draws, seed=seed, workers=workers))
    cells = []
    for alpha in alphas:
        threshold = alpha ** (1.0 / q) * g
        p = float(np.mean(maxima >= threshold))
        c1, bound = lemma2_bound(alpha, q, s, neg_mean)
        cells.append(Lemma2Cell(float(alpha), threshold, p, math.sqrt(p * (1 - p) / draws), bound, c1))
    return cells


# ------------------------------------------------ large deviations of M_{n,m}


def ldp_threshold(spec: DistributionSpec, n: int, m: int, r: float) -> float:
    """``n (c r + c gamma + g(1/m))``."""
    c = classify_exp_type(spec)
    if c is None:
        raise ValueError(f"{spec} has no known exponential-type parameter")
    return n * (c * r + c * EULER_GAMMA + upper_quantile(spec, 1.0 / m))


def ldp_tail_estimate(spec: DistributionSpec, n: int, m: int, r: float, trials: int,
                      side: str = "upper_dev", *, seed: int = 0, workers: int = 1,
                      optima: np.ndarray | None = None, point: int = 0) -> TailEstimate:
    """Frequency of ``M_{n,m} >= threshold`` (``upper_dev``) or ``<=`` (``lower_dev``).

    The attached bounds are the rate-function limits at ``r`` and at ``r``
    shifted by the rectangularity correction ``epsilon(m, n) / c``. For
    ``upper_dev`` the upper bound is ``-Lambda*(r)`` and the lower one
    ``-Lambda*(r + eps)``; for ``lower_dev`` the roles swap. Pass ``optima``
    to reuse one trial set for several thresholds.
    """
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    c = classify_exp_type(spec)
    if c is None:
        raise ValueError(f"{spec} has no known exponential-type parameter")
    threshold = ldp_threshold(spec, n, m, r)
    if optima is None:
        optima = sample_optima(spec, n, m, trials=trials, seed=seed, point=point, workers=workers)[:, 0]
    optima = np.asarray(optima, dtype=np.float64)
    trials = optima.size
    hit = optima >= threshold if side == "upper_dev" else optima <= threshold
    hits = int(hit.sum())
    p_hat = hits / trials
    eps = epsilon_value(spec, n, m) / c
    at_r = -gumbel_rate(r)[0]
    shifted = -gumbel_rate(r + eps)[0]
    notes = []
    if side == "upper_dev":
        upper, lower = at_r, shifted
        if not r > 0:
            notes.append("upper bound stated for r > 0 only")
        if not r > -eps:
            notes.append("lower bound stated for r > -eps only")
    else:
        upper, lower = shifted, at_r
        if not r < -eps:
            notes.append("upper bound stated for r < -eps only")
        if not r < 0:
            notes.append("lower bound stated for r < 0 only")
    if hits == 0:
        notes.append("no hits")
        log_rate = se_log = None
    else:
        log_rate = math.log(p_hat) / n
        rng = np.random.Generator(np.random.Philox(key=seed, counter=(BOOTSTRAP_OFFSET + point) << 192))
        se_log = bootstrap_se(hit, lambda h: math.log(h.mean()) / n if h.any() else None, rng)
    return TailEstimate(n, m, float(r), threshold, p_hat, log_rate, se_log, upper, lower, False,
                        side, hits, trials, eps, math.sqrt(p_hat * (1 - p_hat) / trials), tuple(notes))


# ------------------------------------- tilted sums of centred Gumbel variables


def tilted_gumbel_quantile(t: float, u):
    """Inverse CDF of the Gumbel law tilted by ``exp(t x)``, ``t < 1``.

    Under the tilt ``exp(-G)`` is Gamma(1 - t), so the CDF at ``x`` is the
    regularised upper incomplete gamma ``Q(1 - t, exp(-x))``; inverting it
    in ``w = exp(-x)`` gives the quantile.
    """
    if t >= 1:
        raise ValueError("tilt infeasible: t must be < 1")
    with np.errstate(divide="ignore"):
        return -np.log(special.gammainccinv(1.0 - t, u))


def _tilted_trials(args, gen, count):
    n, t, log_norm, r = args
    y = tilted_gumbel_quantile(t, gen.random((count, n))) - EULER_GAMMA
    s = y.sum(axis=1)
    hit = s >= n * r if r > 0 else s <= n * r
    return np.where(hit, np.exp(-t * s + log_norm), 0.0)


def _plain_trials(args, gen, count):
    n, r = args
    u = gen.random((count, n))
    with np.errstate(divide="ignore"):
        s = (-np.log(-np.log(u)) - EULER_GAMMA).sum(axis=1)
    return (s >= n * r if r > 0 else s <= n * r).astype(np.float64)


def _weighted_estimate(n, r, weights, weighted, seed, point) -> TailEstimate:
    trials = weights.size
    p_hat = float(weights.mean())
    hits = int(np.count_nonzero(weights))
    se = float(weights.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    bound = -gumbel_rate(r)[0]
    if hits == 0:
        return TailEstimate(n, n, float(r), n * r, 0.0, None, None, bound, bound, weighted,
                            "upper_dev" if r > 0 else "lower_dev", 0, trials, 0.0, se, ("no hits",))
    rng = np.random.Generator(np.random.Philox(key=seed, counter=(BOOTSTRAP_OFFSET + point) << 192))
    se_log = bootstrap_se(weights, lambda w: math.log(w.mean()) / n if w.any() else None, rng)
    return TailEstimate(n, n, float(r), n * r, p_hat, math.log(p_hat) / n, se_log, bound, bound,
                        weighted, "upper_dev" if r > 0 else "lower_dev", hits, trials, 0.0, se)


def cramer_is_estimate(n: int, r: float, trials: int, *, seed: int = 0, point: int = 0,
                       workers: int = 1) -> TailEstimate:
    """Importance-sampled ``P(S_n / n >= r)`` (``<=`` for ``r < 0``), ``S_n`` a sum of centred Gumbels.

    Proposal: each summand tilted by ``exp(t* x)`` with ``Lambda'(t*) = r``.
    Each trial contributes ``exp(-t* S_n + n Lambda(t*))`` on the event.
    """
    if r == 0:
        raise ValueError("r must be nonzero")
    _, t = gumbel_rate(r)
    if t >= 1:
        raise ValueError("tilt infeasible: t* >= 1")
    weights = run_trials(_tilted_trials, (n, t, n * gumbel_cgf(t), r), seed=seed, point=point,
                         trials=trials, workers=workers)
    return _weighted_estimate(n, r, weights, True, seed, point)


def plain_gumbel_tail_estimate(n: int, r: float, trials: int, *, seed: int = 0, point: int = 0,
                               workers: int = 1) -> TailEstimate:
    """Unweighted frequency of the same event; cross-check for :func:`cramer_is_estimate`."""
    if r == 0:
        raise ValueError("r must be nonzero")
    hits = run_trials(_plain_trials, (n, r), seed=seed, point=point, trials=trials, workers=workers)
    return _weighted_estimate(n, r, hits, False, seed, point)
