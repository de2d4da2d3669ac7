"""Acceptance criteria 1-12, one test each.

Each test prints ``criterion N: PASS|FAIL`` with the measured numbers; the
same lines are repeated in the terminal summary. Tolerances are fixed here
and are not tuned per run.
"""

import math
import time

import numpy as np
import pytest

from randassign.distributions import exponential, gaussian, pareto, uniform, upper_quantile
from randassign.evt import EULER_GAMMA, gumbel_rate, gumbel_rate_grid, log_gamma
from randassign.experiments import (
    ExperimentConfig,
    build_report,
    cramer_is_estimate,
    cumulant_convergence_check,
    estimate_expectation,
    estimate_min_expectation,
    expectation_limit_check,
    ftg_convergence_check,
    ldp_tail_estimate,
    lemma2_bound_check,
    lln_report,
    moment_convergence_check,
    sample_optima,
)
from randassign.lap_solver import solve, verify_certificate
from randassign.matrix_core import UNASSIGNED, CostMatrix, brute_force_optimum

SEED = 20240611
PI2_6 = math.pi ** 2 / 6

pytestmark = pytest.mark.slow


def test_criterion_01_solver_exactness(criterion):
    rng = np.random.default_rng(SEED)
    start = time.perf_counter()
    worst, bad = 0.0, 0
    for _ in range(500):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(n, n + 4))
        mat = CostMatrix(rng.random((n, m)))
        result, diag = solve(mat, "max")
        worst = max(worst, abs(result.value - brute_force_optimum(mat, "max").value))
        cols = [c for c in result.permutation.assignment if c != UNASSIGNED]
        if len(set(cols)) != n or not verify_certificate(mat, result, diag):
            bad += 1
    elapsed = time.perf_counter() - start
    criterion(1, worst <= 1e-9 and bad == 0 and elapsed < 10,
              f"max |solve - brute| = {worst:.2e}, failures = {bad}, {elapsed:.1f} s")


def test_criterion_02_exact_exponential_oracle(criterion):
    start = time.perf_counter()
    p8 = estimate_min_expectation(ExperimentConfig(exponential(1.0), ((8, 8),), trials=20_000, seed=SEED))[0]
    elapsed = time.perf_counter() - start
    p32 = estimate_min_expectation(ExperimentConfig(exponential(1.0), ((32, 32),), trials=2_000, seed=SEED))[0]
    ok8 = abs(p8.stats.mean - 1.527422) <= 4 * p8.stats.std_error and elapsed < 60
    ok32 = abs(p32.stats.mean - 1.614167) <= 4 * p32.stats.std_error
    closer = abs(p32.stats.mean - PI2_6) < abs(p8.stats.mean - PI2_6)
    criterion(2, ok8 and ok32 and closer,
              f"n=8 mean {p8.stats.mean:.5f} (se {p8.stats.std_error:.5f}, {elapsed:.1f} s); "
              f"n=32 mean {p32.stats.mean:.5f} (se {p32.stats.std_error:.5f})")


def test_criterion_03_ratio_band(criterion):
    start = time.perf_counter()
    pt = estimate_expectation(ExperimentConfig(exponential(1.0), ((200, 300),), trials=200, seed=SEED))[0]
    elapsed = time.perf_counter() - start
    direct = pt.optimum.mean / (200 * upper_quantile(exponential(1.0), 1 / 300))
    criterion(3, 0.95 <= pt.ratio <= 1.15 and abs(direct - pt.ratio) <= 1e-12 and elapsed < 300,
              f"ratio {pt.ratio:.4f} in [0.95, 1.15], {elapsed:.1f} s")


def test_criterion_04_lln(criterion):
    sched = ((50, 100), (200, 400), (800, 1600))
    pts = lln_report(ExperimentConfig(exponential(1.0), sched, trials=200, seed=SEED))
    stds = [p.ratio_std for p in pts]
    last = pts[-1]
    ok = all(a > b for a, b in zip(stds, stds[1:])) and 0.85 <= last.ratio_min and last.ratio_max <= 1.20
    criterion(4, ok, "std " + ", ".join(f"{s:.4f}" for s in stds)
              + f"; n=800 range [{last.ratio_min:.4f}, {last.ratio_max:.4f}]")


def test_criterion_05_rate_function(criterion):
    grid = np.round(np.arange(-2.0, 2.0 + 1e-9, 0.1), 10)
    values = np.array([gumbel_rate(r)[0] for r in grid])
    zero = gumbel_rate(0.0)[0]
    convex = np.max(values[1:-1] - 0.5 * (values[:-2] + values[2:]))
    newton_gap = max(abs(v - gumbel_rate_grid(r)[0]) for r, v in zip(grid, values))
    gamma_err = max(abs(math.exp(log_gamma(1.0)) - 1), abs(math.exp(log_gamma(0.5)) - math.sqrt(math.pi)),
                    abs(math.exp(log_gamma(5.0)) - 24) / 24)
    criterion(5, zero <= 1e-10 and convex <= 1e-9 and newton_gap <= 1e-6 and gamma_err <= 1e-12,
              f"L*(0) = {zero:.1e}, convexity excess {convex:.1e}, newton vs grid {newton_gap:.1e}, "
              f"gamma identities {gamma_err:.1e}")


def test_criterion_06_cumulant(criterion):
    checks = [cumulant_convergence_check(exponential(1.0), 1000, t, 200_000, seed=SEED) for t in (-0.4, 0.4)]
    gaps = [c.gap for c in checks]
    criterion(6, max(gaps) <= 0.02, "gaps at t=-0.4, 0.4: " + ", ".join(f"{g:.4f}" for g in gaps))


def test_criterion_07_expectation_limit(criterion):
    pts = expectation_limit_check(exponential(1.0), [10, 100, 1000])
    ok = all(p.exact and abs(p.value - EULER_GAMMA) <= 0.6 / p.n for p in pts)
    criterion(7, ok, ", ".join(f"n={p.n}: {abs(p.value - EULER_GAMMA):.2e} <= {0.6 / p.n:.1e}" for p in pts))


def test_criterion_08_importance_sampling(criterion):
    target = gumbel_rate(0.5)[0]
    gaps = []
    for i, n in enumerate((50, 100, 200)):
        est = cramer_is_estimate(n, 0.5, 100_000, seed=SEED, point=i)
        gaps.append(abs(est.log_rate + target))
    ok = gaps[-1] <= math.log(200) / 200 + 0.02 and all(a >= b for a, b in zip(gaps, gaps[1:]))
    criterion(8, ok, "discrepancy n=50,100,200: " + ", ".join(f"{g:.4f}" for g in gaps)
              + f"; limit {math.log(200) / 200 + 0.02:.4f}")


def test_criterion_09_ldp_sandwich(criterion):
    spec = exponential(1.0)
    optima = sample_optima(spec, 40, 60, trials=200_000, seed=SEED, point=0)[:, 0]
    up = ldp_tail_estimate(spec, 40, 60, 0.3, 200_000, seed=SEED, optima=optima)
    lo_band = -gumbel_rate(0.3 + up.epsilon)[0] - 0.1
    hi_band = -gumbel_rate(0.3)[0] + 0.1
    ok_up = up.log_rate is not None and lo_band <= up.log_rate <= hi_band
    # one r below -epsilon, where the lower-deviation bounds apply
    r = -0.6
    down = ldp_tail_estimate(spec, 40, 60, r, 200_000, side="lower_dev", seed=SEED, optima=optima)
    ok_down = (r < -down.epsilon and down.log_rate is not None
               and down.bound_lower - 0.1 <= down.log_rate <= down.bound_upper + 0.1)
    criterion(9, ok_up and ok_down,
              f"upper r=0.3: {up.log_rate:.4f} in [{lo_band:.4f}, {hi_band:.4f}] ({up.hits} hits); "
              f"lower r={r}: {down.log_rate:.4f} in [{down.bound_lower - 0.1:.4f}, "
              f"{down.bound_upper + 0.1:.4f}] ({down.hits} hits); eps {up.epsilon:.4f}")


def test_criterion_10_maximum_tail_bound(criterion):
    cells = []
    for spec in (exponential(1.0), gaussian(0.0, 1.0)):
        cells += lemma2_bound_check(spec, 1000, 2, 6, [8, 16, 32], draws=100_000, seed=SEED)
    worst = max(c.empirical_prob - c.bound - 3 * c.std_error for c in cells)
    criterion(10, all(c.ok for c in cells), f"{len(cells)} cells, max (prob - bound - 3 se) = {worst:.2e}")


def test_criterion_11_moments_and_ftg(criterion):
    sched = [100, 1000, 10_000]
    par = moment_convergence_check(pareto(2.0), 2.0, 1.0, sched, 100_000, seed=SEED)
    uni = moment_convergence_check(uniform(), 1.0, 1.0, sched, 100_000, seed=SEED)
    ftg = ftg_convergence_check(exponential(1.0), 1000, 100_000, seed=SEED)

    def decreasing(points):
        gaps = [abs(p.gap) for p in points]
        return all(a > b for a, b in zip(gaps, gaps[1:]))

    ok = decreasing(par) and decreasing(uni) and ftg.ks < 0.01
    criterion(11, ok, "pareto |gap| " + ", ".join(f"{abs(p.gap):.2e}" for p in par)
              + "; uniform |gap| " + ", ".join(f"{abs(p.gap):.2e}" for p in uni)
              + f"; KS {ftg.ks:.4f}")


def test_criterion_12_determinism(criterion):
    runs = {
        "expectation": {"seed": SEED, "schedule": "20x30;40x60", "trials": 2500, "method": "both"},
        "ldp": {"seed": SEED, "n": 10, "m": 15, "r": "0.2,0.5", "trials": 3000},
        "moments": {"seed": SEED, "n": "100,1000", "trials": 5000},
    }
    same = {kind: build_report(kind, raw, 1).to_csv() == build_report(kind, raw, 3).to_csv()
            for kind, raw in runs.items()}
    criterion(12, all(same.values()), ", ".join(f"{k}: {'identical' if v else 'differs'}" for k, v in same.items()))
