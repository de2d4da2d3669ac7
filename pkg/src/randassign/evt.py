"""Extreme-value analytics.

Log-gamma (Lanczos, g=7) and digamma are implemented here rather than taken
from a math library so that the cumulant generating function of the centred
Gumbel law,

    Lambda(t) = log Gamma(1 - t) - gamma * t,      t < 1,

and its Legendre transform ``Lambda*(r) = sup_t (t r - Lambda(t))`` rest on
code whose identities the test-suite pins directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distributions import DistributionSpec, upper_quantile

EULER_GAMMA = 0.5772156649015329

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


class Infinite:
    """Explicit ``+inf`` value of a cumulant generating function.

    Arithmetic with it fails loudly instead of propagating ``nan``.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __gt__(self, other):
        return not isinstance(other, Infinite)

    def __ge__(self, other):
        return True

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return isinstance(other, Infinite)


INFINITE = Infinite()


class Unbracketable(ArithmeticError):
    pass


def _scalar_or_array(x):
    scalar = np.ndim(x) == 0
    return scalar, np.asarray(x, dtype=np.float64)


# -------------------------------------------------------- special functions


def log_gamma(x):
    """``log Gamma(x)`` for ``x > 0``.

    Lanczos approximation (g=7, 9 coefficients) for ``x >= 0.5``; smaller
    arguments are lifted once with ``log Gamma(x) = log Gamma(x + 1) - log x``.
    """
    scalar, x = _scalar_or_array(x)
    if np.any(~(x > 0)):
        raise ValueError("log_gamma is defined here for x > 0 only")
    small = x < 0.5
    z = np.where(small, x + 1.0, x) - 1.0
    acc = np.full_like(z, _LANCZOS_COEF[0])
    for k in range(1, 9):
        acc = acc + _LANCZOS_COEF[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    out = _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(acc)
    out = np.where(small, out - np.log(x), out)
    return float(out) if scalar else out


def digamma(x):
    """``psi(x)`` for ``x > 0``: recurrence up to ``x >= 6``, then the asymptotic series."""
    scalar, x = _scalar_or_array(x)
    if np.any(~(x > 0)):
        raise ValueError("digamma is defined here for x > 0 only")
    shift = np.zeros_like(x)
    x = x.copy()
    while True:
        low = x < 6.0
        if not np.any(low):
            break
        shift = shift - np.where(low, 1.0 / np.where(low, x, 1.0), 0.0)
        x = np.where(low, x + 1.0, x)
    inv2 = 1.0 / (x * x)
    series = inv2 * (1.0 / 12 - inv2 * (1.0 / 120 - inv2 * (1.0 / 252 - inv2 * (
        1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12.0))))))
    out = shift + np.log(x) - 0.5 / x - series
    return float(out) if scalar else out


def trigamma(x):
    """``psi'(x)`` for ``x > 0``; Newton slope for the rate function."""
    scalar, x = _scalar_or_array(x)
    if np.any(~(x > 0)):
        raise ValueError("trigamma is defined here for x > 0 only")
    shift = np.zeros_like(x)
    x = x.copy()
    while True:
        low = x < 6.0
        if not np.any(low):
            break
        safe = np.where(low, x, 1.0)
        shift = shift + np.where(low, 1.0 / (safe * safe), 0.0)
        x = np.where(low, x + 1.0, x)
    inv = 1.0 / x
    inv2 = inv * inv
    series = inv + 0.5 * inv2 + inv * inv2 * (1.0 / 6 - inv2 * (1.0 / 30 - inv2 * (1.0 / 42 - inv2 * (
        1.0 / 30 - inv2 * (5.0 / 66 - inv2 * (691.0 / 2730 - inv2 * 7.0 / 6))))))
    out = shift + series
    return float(out) if scalar else out


# ------------------------------------------------------- Gumbel cumulants


def gumbel_cgf(t: float):
    """``Lambda(t) = log E exp(t (G - gamma))``; :data:`INFINITE` for ``t >= 1``."""
    t = float(t)
    if t >= 1.0:
        return INFINITE
    return log_gamma(1.0 - t) - EULER_GAMMA * t


def gumbel_cgf_derivative(t: float) -> float:
    """``Lambda'(t) = -psi(1 - t) - gamma``, ``t < 1``."""
    if t >= 1.0:
        raise ValueError("Lambda' is finite only for t < 1")
    return -digamma(1.0 - t) - EULER_GAMMA


def _cgf_array(t: np.ndarray) -> np.ndarray:
    return log_gamma(1.0 - t) - EULER_GAMMA * t


_T_CEILING = 1.0 - 1e-12


def gumbel_rate(r: float, tol: float = 1e-14) -> tuple[float, float]:
    """``(Lambda*(r), t*)`` where ``t*`` solves ``Lambda'(t) = r``.

    Safeguarded Newton: every step that leaves the current bracket is
    replaced by bisection.
    """
    r = float(r)
    hi = _T_CEILING
    if gumbel_cgf_derivative(hi) <= r:
        raise Unbracketable(f"Lambda'(t) never reaches r={r} below t=1")
    lo = -1.0
    while gumbel_cgf_derivative(lo) >= r:
        lo *= 2.0
        if lo < -1e300:
            raise Unbracketable(f"Lambda'(t) never drops below r={r}")

    t = 0.0 if lo < 0.0 < hi else 0.5 * (lo + hi)
    for _ in range(500):
        f = gumbel_cgf_derivative(t) - r
        if f == 0.0:
            break
        if f > 0:
            hi = t
        else:
            lo = t
        if abs(f) <= tol * (1.0 + abs(r)) or hi - lo <= 4e-16 * max(1.0, abs(t)):
            break
        step = f / trigamma(1.0 - t)
        cand = t - step
        t = cand if lo < cand < hi else 0.5 * (lo + hi)
    value = t * r - log_gamma(1.0 - t) + EULER_GAMMA * t
    # Lambda(0) = 0 makes the supremum nonnegative.
    return max(value, 0.0), t


def gumbel_rate_grid(r: float, points: int = 10_000, rounds: int = 4) -> tuple[float, float]:
    """Brute-force ``sup_t (t r - Lambda(t))`` on zooming uniform grids.

    Uses no derivative information; it is the independent check on
    :func:`gumbel_rate`. The left end of the first grid is pushed out by
    doubling until the concave objective is decreasing there.
    """
    r = float(r)

    def objective(t):
        return t * r - _cgf_array(t)

    span = 1.0
    while objective(np.array([-2.0 * span]))[0] >= objective(np.array([-span]))[0]:
        span *= 2.0
        if span > 1e12:
            raise Unbracketable(f"grid search cannot bracket r={r}")
    lo, hi = -2.0 * span, _T_CEILING
    best_t, best_v = 0.0, 0.0
    for _ in range(rounds):
        grid = np.linspace(lo, hi, points)
        vals = objective(grid)
        k = int(np.argmax(vals))
        if vals[k] >= best_v:
            best_t, best_v = float(grid[k]), float(vals[k])
        lo = grid[max(k - 1, 0)]
        hi = grid[min(k + 1, points - 1)]
    return max(best_v, 0.0), best_t


@dataclass(frozen=True)
class RateFunctionTable:
    grid_r: np.ndarray
    lambda_star: np.ndarray
    maximizer_t: np.ndarray
    gamma_const: float = EULER_GAMMA

    def rows(self):
        for r, ls, t in zip(self.grid_r, self.lambda_star, self.maximizer_t):
            yield float(r), float(ls), float(t)


def rate_grid(r_min: float, r_max: float, step: float) -> np.ndarray:
    if step <= 0 or r_max < r_min:
        raise ValueError("need step > 0 and r_max >= r_min")
    count = int(math.floor((r_max - r_min) / step + 1e-9)) + 1
    grid = r_min + step * np.arange(count)
    return np.round(grid, 12) + 0.0


def rate_function_table(r_min: float, r_max: float, step: float) -> RateFunctionTable:
    grid = rate_grid(r_min, r_max, step)
    values = np.empty_like(grid)
    ts = np.empty_like(grid)
    for i, r in enumerate(grid):
        values[i], ts[i] = gumbel_rate(r)
    return RateFunctionTable(grid, values, ts)


# ---------------------------------------------- three extreme-value laws


def gumbel_cdf(r):
    return np.exp(-np.exp(-np.asarray(r, dtype=np.float64))) if np.ndim(r) else math.exp(-math.exp(-r))


def frechet_cdf(alpha: float, r):
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    scalar, r = _scalar_or_array(r)
    pos = np.where(r > 0, r, 1.0)
    out = np.where(r <= 0, 0.0, np.exp(-pos ** -alpha))
    return float(out) if scalar else out


def weibull_cdf(alpha: float, r):
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    scalar, r = _scalar_or_array(r)
    neg = np.where(r <= 0, -r, 0.0)
    out = np.where(r > 0, 1.0, np.exp(-neg ** alpha))
    return float(out) if scalar else out


def sample_gumbel(rng: np.random.Generator, size=None):
    u = rng.random(size)
    with np.errstate(divide="ignore"):
        return -np.log(-np.log(u))


def sample_frechet(alpha: float, rng: np.random.Generator, size=None):
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    with np.errstate(divide="ignore"):
        return (-np.log(rng.random(size))) ** (-1.0 / alpha)


def sample_weibull(alpha: float, rng: np.random.Generator, size=None):
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    with np.errstate(divide="ignore"):
        return -((-np.log(rng.random(size))) ** (1.0 / alpha))


def frechet_moment(alpha: float, k: float) -> float:
    """``E Phi_alpha^k = Gamma(1 - k/alpha)`` for ``0 < k < alpha``."""
    if not 0 < k < alpha:
        raise ValueError("Frechet moment needs 0 < k < alpha")
    return math.exp(log_gamma(1.0 - k / alpha))


def weibull_moment(alpha: float, k: float) -> float:
    """``E (-Psi_alpha)^k = Gamma(1 + k/alpha)``."""
    if alpha <= 0 or k <= 0:
        raise ValueError("Weibull moment needs alpha > 0 and k > 0")
    return math.exp(log_gamma(1.0 + k / alpha))


# ----------------------------------------------- rectangularity correction


@dataclass(frozen=True)
class EpsilonReport:
    n: int
    m: int
    epsilon: float
    sequence_values: tuple[float, ...] | None
    eps_inf: float
    eps_sup: float


def epsilon_value(spec: DistributionSpec, n: int, m: int) -> float:
    """``g(1/m) - (1/n) sum_{k=1}^{n} g(1/(m - n + k))``."""
    if not 1 <= n <= m:
        raise ValueError(f"need 1 <= n <= m, got n={n}, m={m}")
    args = 1.0 / np.arange(m - n + 1, m + 1, dtype=np.float64)
    g = np.asarray(upper_quantile(spec, args), dtype=np.float64)
    if not np.all(np.isfinite(g)):
        raise ValueError(f"g is not finite on 1/{m - n + 1} .. 1/{m}")
    head = float(g[-1])
    return head - math.fsum(g) / n


def epsilon(spec: DistributionSpec, n: int, m: int,
            schedule: Sequence[tuple[int, int]] | None = None) -> EpsilonReport:
    """``epsilon(m, n)`` plus inf/sup over the trailing half of ``schedule``.

    The trailing-half extremes stand in for the liminf/limsup along the
    schedule; they are finite-sample proxies, not limits.
    """
    value = epsilon_value(spec, n, m)
    if not schedule:
        return EpsilonReport(n, m, value, None, value, value)
    seq = tuple(epsilon_value(spec, int(nn), int(mm)) for nn, mm in schedule)
    trailing = seq[len(seq) // 2:]
    return EpsilonReport(n, m, value, seq, min(trailing), max(trailing))
