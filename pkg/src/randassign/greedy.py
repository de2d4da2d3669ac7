"""Row-greedy generalized permutation and the two-sided sum-of-maxima bound.

The greedy walk takes the largest free entry in row 1, then row 2, and so on.
``sandwich_sample`` draws the independent maxima that bracket the optimum in
distribution without building a matrix.
"""

from __future__ import annotations

import numpy as np

from . import _backend
from .distributions import DistributionSpec, upper_quantile
from .matrix_core import (
    UNASSIGNED,
    AssignmentResult,
    CostMatrix,
    GeneralizedPermutation,
)


def greedy_assignment(matrix: CostMatrix) -> AssignmentResult:
    """Greedy maximisation, rows in order, ties to the lowest free column.

    A matrix with more rows than columns is walked on its transpose.
    """
    if matrix.n > matrix.m:
        col4row, total = _backend.greedy_max(np.ascontiguousarray(matrix.entries.T))
        assignment = np.full(matrix.n, UNASSIGNED, dtype=np.intp)
        assignment[np.asarray(col4row)] = np.arange(matrix.m)
    else:
        assignment, total = _backend.greedy_max(matrix.entries)
    perm = GeneralizedPermutation(tuple(np.asarray(assignment).tolist()))
    return AssignmentResult(float(total), perm, "max")


def greedy_value(entries: np.ndarray) -> float:
    """Greedy value only; ``entries`` must have ``n <= m``."""
    return float(_backend.greedy_max(np.ascontiguousarray(entries, dtype=np.float64))[1])


def sandwich_terms(spec: DistributionSpec, n: int, m: int, u_lower, u_upper):
    """Map uniforms to the independent maxima of both bounds.

    ``u_lower[k]`` drives ``M_{m-n+1+k}`` and ``u_upper[k]`` drives the k-th copy of ``M_m``.
    """
    lower = _max_terms(spec, np.arange(m - n + 1, m + 1), u_lower)
    upper = _max_terms(spec, np.full(n, m), u_upper)
    return lower, upper


def _max_terms(spec, sizes, u):
    u = np.asarray(u, dtype=np.float64)
    with np.errstate(divide="ignore"):
        p = -np.expm1(np.log(u) / sizes)
    p = np.where(p > 0, p, np.finfo(float).tiny)
    return np.asarray(upper_quantile(spec, p))


def sandwich_sample(spec: DistributionSpec, n: int, m: int, rng: np.random.Generator) -> tuple[float, float]:
    """One draw of ``(sum_{k=m-n+1}^{m} M_k, sum_{k=1}^{n} M_m^{(k)})``.

    Every summand comes from its own uniform, so both sums have independent
    terms and the two sums are independent of each other.
    """
    if not 1 <= n <= m:
        raise ValueError(f"sandwich_sample needs 1 <= n <= m, got n={n}, m={m}")
    u = rng.random(2 * n)
    lower, upper = sandwich_terms(spec, n, m, u[:n], u[n:])
    return _ordered_sum(lower), _ordered_sum(upper)


def _ordered_sum(values) -> float:
    total = 0.0
    for x in values:
        total += float(x)
    return total
