"""Exact rectangular assignment by shortest augmenting paths with dual potentials.

Maximisation is solved as minimisation of the negated matrix. Problems with
more rows than columns are solved on the transpose and mapped back.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import _backend
from .matrix_core import (
    UNASSIGNED,
    AssignmentResult,
    CostMatrix,
    GeneralizedPermutation,
    Objective,
    evaluate,
)


class NonFiniteEntry(ValueError):
    pass


@dataclass(frozen=True)
class SolverDiagnostics:
    """Optimality certificate in the orientation of the caller's objective.

    For ``max``: ``dual_row[i] + dual_col[j] >= entry(i, j)``, ``dual_col >= 0``.
    For ``min``: ``dual_row[i] + dual_col[j] <= entry(i, j)``, ``dual_col <= 0``.
    Equality holds on assigned pairs and ``dual_col`` vanishes on unused columns.
    Both arrays are indexed by the original rows/columns.
    """

    augmenting_paths: int
    dual_row: np.ndarray
    dual_col: np.ndarray
    runtime_ns: int
    transposed: bool = False


def tolerance(matrix: CostMatrix) -> float:
    return 1e-9 * max(1.0, float(np.abs(matrix.entries).max()))


def solve(matrix: CostMatrix, objective: Objective = "max") -> tuple[AssignmentResult, SolverDiagnostics]:
    """Exact optimum of the assignment process on ``matrix``.

    Parameters
    ----------
    matrix : CostMatrix
    objective : {"max", "min"}

    Returns
    -------
    result : AssignmentResult
        Optimal value and assignment (surplus rows are ``UNASSIGNED`` when ``n > m``).
    diagnostics : SolverDiagnostics
        Dual potentials certifying optimality, see :func:`verify_certificate`.
    """
    if objective not in ("max", "min"):
        raise ValueError(f"objective must be 'max' or 'min', got {objective!r}")
    entries = matrix.entries
    if not np.all(np.isfinite(entries)):
        raise NonFiniteEntry("cost matrix has a non-finite entry")

    start = time.perf_counter_ns()
    transposed = matrix.n > matrix.m
    work = entries.T if transposed else entries
    cost = np.ascontiguousarray(-work if objective == "max" else work, dtype=np.float64)
    col4row, u, v, paths = _backend.lap_min(cost)
    elapsed = time.perf_counter_ns() - start

    sign = -1.0 if objective == "max" else 1.0
    u = sign * np.asarray(u)
    v = sign * np.asarray(v)
    if transposed:
        assignment = np.full(matrix.n, UNASSIGNED, dtype=np.intp)
        assignment[np.asarray(col4row)] = np.arange(matrix.m)
        dual_row, dual_col = v, u
    else:
        assignment = np.asarray(col4row)
        dual_row, dual_col = u, v

    perm = GeneralizedPermutation(tuple(assignment.tolist()))
    result = AssignmentResult(evaluate(matrix, perm), perm, objective)
    diag = SolverDiagnostics(paths, dual_row, dual_col, elapsed, transposed)
    return result, diag


def optimum_value(entries: np.ndarray, objective: Objective = "max") -> float:
    """Optimal value only, for Monte Carlo loops; ``entries`` must have ``n <= m``."""
    cost = -entries if objective == "max" else entries
    col4row, _, _, _ = _backend.lap_min(np.ascontiguousarray(cost, dtype=np.float64))
    picked = entries[np.arange(entries.shape[0]), col4row]
    total = 0.0
    for x in picked:
        total += x
    return float(total)


def verify_certificate(matrix: CostMatrix, result: AssignmentResult, diag: SolverDiagnostics,
                       tol: float | None = None) -> bool:
    """Check dual feasibility and complementary slackness of ``diag`` for ``result``.

    A ``True`` answer proves that ``result`` is optimal for its objective.
    """
    n, m = matrix.shape
    dual_row = np.asarray(diag.dual_row, dtype=np.float64)
    dual_col = np.asarray(diag.dual_col, dtype=np.float64)
    assignment = result.permutation.assignment
    if len(assignment) != n:
        raise ValueError(f"assignment length {len(assignment)} does not match n={n}")
    if diag.transposed != (n > m):
        raise ValueError("certificate orientation does not match the matrix shape")
    if dual_row.shape != (n,) or dual_col.shape != (m,):
        raise ValueError("dual arrays do not match the matrix shape")

    if tol is None:
        tol = tolerance(matrix)
    sign = 1.0 if result.objective == "max" else -1.0
    entries = sign * matrix.entries
    rows = sign * dual_row
    cols = sign * dual_col
    try:
        result.permutation.validate_against(matrix)
    except ValueError:
        return False

    # In max orientation: rows[i] + cols[j] >= entry, the free side carries a
    # nonnegative potential, and potentials vanish where nothing is matched.
    if np.any(rows[:, None] + cols[None, :] < entries - tol):
        return False
    pairs = [(i, j) for i, j in enumerate(assignment) if j != UNASSIGNED]
    for i, j in pairs:
        if abs(rows[i] + cols[j] - entries[i, j]) > tol:
            return False
    if diag.transposed:
        if np.any(rows < -tol):
            return False
        matched_rows = {i for i, _ in pairs}
        if any(abs(rows[i]) > tol for i in range(n) if i not in matched_rows):
            return False
    else:
        if np.any(cols < -tol):
            return False
        matched_cols = {j for _, j in pairs}
        if any(abs(cols[j]) > tol for j in range(m) if j not in matched_cols):
            return False
    if abs(result.value - evaluate(matrix, result.permutation)) > tol:
        return False
    return True
