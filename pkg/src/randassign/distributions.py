"""Parametric laws for matrix entries: tails, upper quantiles, inverse-CDF sampling.

The upper quantile ``g(p) = inf{r : P(X >= r) < p}`` is the central object:
every sampler in the package maps a uniform draw through it, so the maximum
of ``n`` draws is a single evaluation of ``g`` at ``1 - u**(1/n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

FAMILIES = {
    # family: (parameter names, defaults or None when required)
    "exponential": (("rate",), (1.0,)),
    "gaussian": (("mean", "sd"), (0.0, 1.0)),
    "gumbel": (("loc", "scale"), (0.0, 1.0)),
    "uniform": (("a", "b"), (0.0, 1.0)),
    "frechet": (("shape",), None),
    "weibull_neg": (("shape",), None),
    "pareto": (("shape",), None),
    "constant": (("value",), (1.0,)),
}

# Families whose tails satisfy the von Mises-type condition behind the Gumbel
# limit of (M_n - b_n) / a_n.
GUMBEL_DOMAIN = frozenset({"exponential", "gumbel", "gaussian"})


class DivergentIntegral(ArithmeticError):
    pass


@dataclass(frozen=True)
class DistributionSpec:
    family: str
    params: tuple[float, ...] = ()

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {sorted(FAMILIES)}")
        names, defaults = FAMILIES[self.family]
        params = tuple(float(p) for p in self.params)
        if not params:
            if defaults is None:
                raise ValueError(f"{self.family} requires parameters {names}")
            params = defaults
        if len(params) != len(names):
            raise ValueError(f"{self.family} takes {len(names)} parameter(s) {names}, got {len(params)}")
        if not all(math.isfinite(p) for p in params):
            raise ValueError("distribution parameters must be finite")
        fam = self.family
        if fam == "exponential" and params[0] <= 0:
            raise ValueError("exponential rate must be > 0")
        if fam in ("gaussian", "gumbel") and params[1] <= 0:
            raise ValueError(f"{fam} scale must be > 0")
        if fam == "uniform" and not params[0] < params[1]:
            raise ValueError("uniform requires a < b")
        if fam in ("frechet", "weibull_neg", "pareto") and params[0] <= 0:
            raise ValueError(f"{fam} shape must be > 0")
        object.__setattr__(self, "params", params)

    @classmethod
    def parse(cls, text: str) -> DistributionSpec:
        """Parse ``family:p1[,p2]``, e.g. ``exponential:1`` or ``gaussian:0,1``."""
        family, _, rest = text.strip().partition(":")
        family = family.strip().lower().replace("-", "_")
        params = tuple(float(x) for x in rest.split(",") if x.strip()) if rest else ()
        return cls(family, params)

    def __str__(self):
        return f"{self.family}:" + ",".join(f"{p:g}" for p in self.params)


def exponential(rate=1.0):
    return DistributionSpec("exponential", (rate,))


def gaussian(mean=0.0, sd=1.0):
    return DistributionSpec("gaussian", (mean, sd))


def gumbel(loc=0.0, scale=1.0):
    return DistributionSpec("gumbel", (loc, scale))


def uniform(a=0.0, b=1.0):
    return DistributionSpec("uniform", (a, b))


def frechet(shape):
    return DistributionSpec("frechet", (shape,))


def weibull_neg(shape):
    return DistributionSpec("weibull_neg", (shape,))


def pareto(shape):
    return DistributionSpec("pareto", (shape,))


def constant(value=1.0):
    return DistributionSpec("constant", (value,))


def _result(values, scalar):
    return float(values) if scalar else values


# ------------------------------------------------------------------- tails


def tail(spec: DistributionSpec, t):
    """``P(X >= t)``."""
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=np.float64)
    fam, p = spec.family, spec.params
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        if fam == "exponential":
            out = np.where(t <= 0, 1.0, np.exp(-p[0] * np.maximum(t, 0.0)))
        elif fam == "gaussian":
            out = special.ndtr(-(t - p[0]) / p[1])
        elif fam == "gumbel":
            out = -np.expm1(-np.exp(-(t - p[0]) / p[1]))
        elif fam == "uniform":
            out = np.clip((p[1] - t) / (p[1] - p[0]), 0.0, 1.0)
        elif fam == "frechet":
            pos = np.where(t > 0, t, 1.0)
            out = np.where(t <= 0, 1.0, -np.expm1(-pos ** -p[0]))
        elif fam == "weibull_neg":
            neg = np.where(t <= 0, -t, 0.0)
            out = np.where(t > 0, 0.0, -np.expm1(-neg ** p[0]))
        elif fam == "pareto":
            out = np.where(t <= 1, 1.0, np.maximum(t, 1.0) ** -p[0])
        else:  # constant
            out = np.where(t <= p[0], 1.0, 0.0)
    return _result(out, scalar)


def cdf(spec: DistributionSpec, t):
    """``P(X <= t)``; equals ``1 - tail`` off atoms."""
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=np.float64)
    if spec.family == "constant":
        return _result(np.where(t >= spec.params[0], 1.0, 0.0), scalar)
    if spec.family == "gaussian":
        return _result(special.ndtr((t - spec.params[0]) / spec.params[1]), scalar)
    return _result(1.0 - np.asarray(tail(spec, t)), scalar)


# --------------------------------------------------------------- quantiles


def upper_quantile(spec: DistributionSpec, p):
    """``g(p) = inf{r : P(X >= r) < p}`` for ``0 < p <= 1``, in closed form."""
    scalar = np.ndim(p) == 0
    p = np.asarray(p, dtype=np.float64)
    if np.any(~(p > 0)) or np.any(p > 1):
        raise ValueError("upper_quantile needs 0 < p <= 1")
    fam, a = spec.family, spec.params
    with np.errstate(divide="ignore", over="ignore"):
        if fam == "exponential":
            out = -np.log(p) / a[0]
        elif fam == "gaussian":
            out = a[0] - a[1] * special.ndtri(p)
        elif fam == "gumbel":
            out = a[0] - a[1] * np.log(-np.log1p(-p))
        elif fam == "uniform":
            out = a[1] - p * (a[1] - a[0])
        elif fam == "frechet":
            out = (-np.log1p(-p)) ** (-1.0 / a[0])
        elif fam == "weibull_neg":
            out = -((-np.log1p(-p)) ** (1.0 / a[0]))
        elif fam == "pareto":
            out = p ** (-1.0 / a[0])
        else:
            out = np.full_like(p, a[0])
    return _result(out, scalar)


def upper_quantile_bisect(spec: DistributionSpec, p: float, rtol: float = 1e-12) -> float:
    """``g(p)`` by bisection on :func:`tail`; the closed forms are checked against it.

    The bracket grows by doubling away from 0 and is capped at +-1e308.
    """
    if not 0 < p <= 1:
        raise ValueError("upper_quantile needs 0 < p <= 1")
    limit = 1e308
    if tail(spec, 0.0) >= p:
        lo, hi = 0.0, 1.0
        while tail(spec, hi) >= p:
            lo, hi = hi, 2.0 * hi
            if hi > limit:
                return math.inf
    else:
        lo, hi = -1.0, 0.0
        while tail(spec, lo) < p:
            lo, hi = 2.0 * lo, lo
            if lo < -limit:
                return -math.inf
    # invariant: tail(lo) >= p > tail(hi)
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi or hi - lo <= max(rtol * max(abs(lo), abs(hi)), 1e-300):
            break
        if tail(spec, mid) >= p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def quantile(spec: DistributionSpec, u):
    """Inverse CDF at ``u``: the value with ``P(X <= x) = u``."""
    scalar = np.ndim(u) == 0
    p = 1.0 - np.asarray(u, dtype=np.float64)
    return _result(upper_quantile(spec, np.where(p > 0, p, np.finfo(float).tiny)), scalar)


def sample(spec: DistributionSpec, rng: np.random.Generator, size=None):
    """Inverse-CDF variates from one uniform draw each."""
    u = rng.random(size)
    return quantile(spec, u)


def max_quantile(spec: DistributionSpec, n: int, u):
    """Quantile of ``M_n = max(X_1..X_n)`` at ``u``: ``g(1 - u**(1/n))`` in log space."""
    if n < 1:
        raise ValueError("n must be >= 1")
    scalar = np.ndim(u) == 0
    u = np.asarray(u, dtype=np.float64)
    with np.errstate(divide="ignore"):
        p = -np.expm1(np.log(u) / n)
    p = np.where(p > 0, p, np.finfo(float).tiny)
    return _result(upper_quantile(spec, p), scalar)


def sample_max(spec: DistributionSpec, n: int, rng: np.random.Generator, size=None):
    """Variates of ``M_n`` from a single uniform each."""
    return max_quantile(spec, n, rng.random(size))


# ------------------------------------------------ mean residual and norming


def mean_residual_h(spec: DistributionSpec, t: float) -> float:
    """``h(t) = int_t^inf P(X >= x) dx / P(X >= t)``."""
    fam, a = spec.family, spec.params
    tl = tail(spec, t)
    if tl <= 0:
        raise ValueError(f"tail of {spec} vanishes at t={t}")
    if fam == "exponential":
        return 1.0 / a[0] + max(0.0, -t)
    if fam == "uniform":
        lo, hi = a
        return (hi - t) / 2.0 if t >= lo else ((hi - lo) / 2.0 + (lo - t))
    if fam == "pareto":
        if a[0] <= 1:
            raise DivergentIntegral(f"{spec} has an infinite mean")
        return t / (a[0] - 1.0) if t >= 1 else (1.0 / (a[0] - 1.0) + (1.0 - t))
    if fam == "frechet" and a[0] <= 1:
        raise DivergentIntegral(f"{spec} has an infinite mean")
    if fam == "constant":
        return a[0] - t
    return _integrate_tail(spec, t) / tl


def _integrate_tail(spec: DistributionSpec, t: float) -> float:
    upper = 0.0 if spec.family == "weibull_neg" else math.inf
    if t >= upper:
        return 0.0
    value, _ = integrate.quad(lambda x: tail(spec, x), t, upper, epsabs=0.0, epsrel=1e-10, limit=200)
    return value


@dataclass(frozen=True)
class NormingConstants:
    n: int
    b_n: float
    a_n: float


def in_gumbel_domain(spec: DistributionSpec) -> bool:
    return spec.family in GUMBEL_DOMAIN


def norming_constants(spec: DistributionSpec, n: int) -> NormingConstants:
    """``b_n = g(1/n)`` and ``a_n = h(b_n)`` for laws in the Gumbel domain."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not in_gumbel_domain(spec):
        raise ValueError(f"{spec} is not flagged as satisfying the Gumbel-domain condition")
    b = upper_quantile(spec, 1.0 / n)
    return NormingConstants(n, b, mean_residual_h(spec, b))


def classify_exp_type(spec: DistributionSpec) -> float | None:
    """Parameter ``c = lim a_n`` of an exponential-type right tail, if known."""
    if spec.family == "exponential":
        return 1.0 / spec.params[0]
    if spec.family == "gumbel":
        return spec.params[1]
    return None


def negative_part_mean(spec: DistributionSpec) -> float:
    """``E X^-`` with ``X^- = max(-X, 0)``."""
    fam, a = spec.family, spec.params
    if fam in ("exponential", "pareto", "frechet"):
        return 0.0
    if fam == "gaussian":
        nu = -a[0] / a[1]
        return a[1] * (nu * special.ndtr(nu) + math.exp(-0.5 * nu * nu) / math.sqrt(2 * math.pi))
    if fam == "uniform":
        lo, hi = a
        if lo >= 0:
            return 0.0
        if hi <= 0:
            return -(lo + hi) / 2.0
        return lo * lo / (2.0 * (hi - lo))
    if fam == "weibull_neg":
        return math.gamma(1.0 + 1.0 / a[0])
    if fam == "constant":
        return max(-a[0], 0.0)
    return negative_part_mean_numeric(spec)


def negative_part_mean_numeric(spec: DistributionSpec) -> float:
    """``E X^- = int_0^inf P(X <= -x) dx`` by adaptive quadrature."""
    value, _ = integrate.quad(lambda x: cdf(spec, -x), 0.0, math.inf, epsabs=1e-13, epsrel=1e-11, limit=200)
    return value


# -------------------------------------------------------------- Potter bound


@dataclass(frozen=True)
class PotterReport:
    A: float
    delta: float
    x0: float
    grid: np.ndarray
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def potter_check(spec: DistributionSpec, A: float, delta: float, x0: float, grid_size: int,
                 decades: float = 10.0) -> PotterReport:
    """Evaluate ``g(x)/g(y) <= A * max((x/y)**delta, (y/x)**delta)`` on a log grid.

    The grid has ``grid_size`` points spread over ``decades`` decades below
    ``x0`` (``x0`` itself excluded); every ordered pair is tested.
    """
    if A <= 1 or delta <= 0 or x0 <= 0 or grid_size < 1:
        raise ValueError("need A > 1, delta > 0, x0 > 0 and grid_size >= 1")
    grid = x0 * np.logspace(-decades, 0.0, grid_size + 1)[:-1]
    g = np.asarray(upper_quantile(spec, np.minimum(grid, 1.0)), dtype=np.float64)
    if np.any(g <= 0):
        raise ValueError(f"g is not positive on (0, {x0}) for {spec}")
    ratio = g[:, None] / g[None, :]
    q = grid[:, None] / grid[None, :]
    bound = A * np.maximum(q ** delta, q ** -delta)
    bad = np.argwhere(ratio > bound)
    violations = [
        (float(grid[i]), float(grid[j]), float(ratio[i, j]), float(bound[i, j])) for i, j in bad
    ]
    return PotterReport(A, delta, x0, grid, violations)
