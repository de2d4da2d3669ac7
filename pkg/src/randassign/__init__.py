"""Exact maxima of random assignment processes and Monte Carlo checks of their asymptotics."""

from ._backend import BACKEND
from .distributions import DistributionSpec
from .greedy import greedy_assignment
from .lap_solver import SolverDiagnostics, solve, verify_certificate
from .matrix_core import (
    AssignmentResult,
    CostMatrix,
    GeneralizedPermutation,
    brute_force_optimum,
    evaluate,
    read_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "AssignmentResult",
    "BACKEND",
    "CostMatrix",
    "DistributionSpec",
    "GeneralizedPermutation",
    "SolverDiagnostics",
    "brute_force_optimum",
    "evaluate",
    "greedy_assignment",
    "read_matrix",
    "solve",
    "verify_certificate",
]
