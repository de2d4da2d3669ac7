import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import linear_sum_assignment

from randassign.greedy import greedy_assignment
from randassign.lap_solver import (
    NonFiniteEntry,
    optimum_value,
    solve,
    verify_certificate,
)
from randassign.matrix_core import (
    UNASSIGNED,
    AssignmentResult,
    CostMatrix,
    GeneralizedPermutation,
    brute_force_optimum,
    evaluate,
    row_maxima_sum,
)

A = CostMatrix([[1, 2], [3, 5]])


def matrices(max_n=5, max_extra=3, tall=False):
    def shape(n):
        lo, hi = (max(1, n - max_extra), n) if tall else (n, n + max_extra)
        return st.integers(lo, hi).flatmap(
            lambda m: arrays(np.float64, (n, m), elements=st.floats(-100, 100, allow_nan=False)))
    return st.integers(1, max_n).flatmap(shape)


def test_examples(backend):
    r, d = solve(A, "max")
    assert r.value == 6.0 and r.permutation.one_based() == [1, 2]
    assert verify_certificate(A, r, d)
    r, d = solve(A, "min")
    assert r.value == 5.0 and r.permutation.one_based() == [2, 1]
    assert verify_certificate(A, r, d)
    z = CostMatrix(np.zeros((4, 4)))
    r, d = solve(z, "max")
    assert r.value == 0.0 and verify_certificate(z, r, d)


def test_single_entry(backend):
    m = CostMatrix([[-3.5]])
    r, d = solve(m, "max")
    assert r.value == -3.5 and verify_certificate(m, r, d)


def test_certificate_rejects_suboptimal_assignment(backend):
    r, d = solve(A, "max")
    worse = AssignmentResult(5.0, GeneralizedPermutation((1, 0)), "max")
    assert not verify_certificate(A, worse, d)


def test_certificate_shape_mismatch(backend):
    r, d = solve(A, "max")
    with pytest.raises(ValueError):
        verify_certificate(CostMatrix(np.zeros((3, 3))), r, d)
    bad = dataclasses.replace(d, dual_col=np.zeros(5))
    with pytest.raises(ValueError):
        verify_certificate(A, r, bad)


def test_certificate_detects_tampered_duals(backend):
    r, d = solve(A, "max")
    tampered = dataclasses.replace(d, dual_row=d.dual_row - 0.5)
    assert not verify_certificate(A, r, tampered)


def test_non_finite(backend):
    # CostMatrix refuses non-finite input, so smuggle one past its constructor
    m = object.__new__(CostMatrix)
    object.__setattr__(m, "entries", np.array([[1.0, np.inf]]))
    with pytest.raises(NonFiniteEntry):
        solve(m, "max")


def test_bad_objective(backend):
    with pytest.raises(ValueError):
        solve(A, "median")


@pytest.mark.parametrize("objective", ["max", "min"])
def test_random_against_brute_force(backend, rng, objective):
    for _ in range(150):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(n, n + 4))
        mat = CostMatrix(rng.random((n, m)))
        r, d = solve(mat, objective)
        oracle = brute_force_optimum(mat, objective)
        assert abs(r.value - oracle.value) <= 1e-9
        assert evaluate(mat, r.permutation) == pytest.approx(r.value, rel=1e-12)
        assert verify_certificate(mat, r, d)


def test_tall_matrix_transposes(backend, rng):
    for _ in range(50):
        m = int(rng.integers(1, 5))
        n = int(rng.integers(m + 1, m + 4))
        mat = CostMatrix(rng.normal(size=(n, m)))
        for objective in ("max", "min"):
            r, d = solve(mat, objective)
            assert d.transposed
            assert r.permutation.assignment.count(UNASSIGNED) == n - m
            assert r.value == pytest.approx(brute_force_optimum(mat, objective).value, abs=1e-9)
            assert verify_certificate(mat, r, d)


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_negation_duality(x):
    m = CostMatrix(x)
    assert solve(m, "max")[0].value == pytest.approx(-solve(-m, "min")[0].value, abs=1e-9)


@given(matrices(max_n=4, max_extra=2), st.integers(0, 3), st.floats(-50, 50))
@settings(max_examples=60, deadline=None)
def test_row_shift_covariance(x, row, c):
    row %= x.shape[0]
    shifted = x.copy()
    shifted[row] += c
    a, b = CostMatrix(x), CostMatrix(shifted)
    base = brute_force_optimum(a, "max").value
    assert solve(b, "max")[0].value == pytest.approx(base + c, abs=1e-9)
    # same optimal set: the shifted solver's choice is optimal for the original
    chosen = solve(b, "max")[0].permutation
    assert evaluate(a, chosen) == pytest.approx(base, abs=1e-9)


@given(matrices())
@settings(max_examples=80, deadline=None)
def test_sandwich_chain(x):
    m = CostMatrix(x)
    best = solve(m, "max")[0].value
    assert greedy_assignment(m).value <= best + 1e-9 <= row_maxima_sum(m) + 2e-9


@given(matrices(tall=True))
@settings(max_examples=60, deadline=None)
def test_certificate_on_all_shapes(x):
    m = CostMatrix(x)
    for objective in ("max", "min"):
        r, d = solve(m, objective)
        assert verify_certificate(m, r, d)


def test_ties_go_to_lowest_column(backend):
    r, _ = solve(CostMatrix(np.ones((3, 5))), "max")
    assert r.permutation.assignment == (0, 1, 2)


@pytest.mark.parametrize("n,m", [(50, 50), (80, 200), (200, 300)])
def test_matches_scipy_at_scale(backend, rng, n, m):
    x = rng.exponential(size=(n, m))
    rows, cols = linear_sum_assignment(x, maximize=True)
    ref = x[rows, cols].sum()
    r, d = solve(CostMatrix(x), "max")
    assert r.value == pytest.approx(ref, rel=1e-12)
    assert optimum_value(x, "max") == pytest.approx(ref, rel=1e-12)
    assert verify_certificate(CostMatrix(x), r, d)


def test_backends_agree_exactly(rng):
    from randassign import _backend
    if _backend.compiled_kernels is None:
        pytest.skip("compiled kernels not built")
    for _ in range(30):
        n = int(rng.integers(1, 40))
        x = -rng.random((n, n + int(rng.integers(0, 20))))
        a = _backend.compiled_kernels.lap_min(np.ascontiguousarray(x))
        b = _backend.python_kernels.lap_min(np.ascontiguousarray(x))
        assert np.array_equal(np.asarray(a[0]), np.asarray(b[0]))
        assert a[3] == b[3]
