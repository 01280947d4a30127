"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line (run with ``pytest -s tests/test_acceptance.py`` to see them).

Statistical criteria use fixed seeds, so the suite is deterministic.
"""

import json
import time

import numpy as np
import pytest
from scipy.stats import ks_2samp, kstest

import devian
from devian.benchmark import run_benchmark
from devian.simulation import _simulate_range

from conftest import (
    batched_null_residuals,
    batched_null_statistic,
    random_design,
    statistic_under_parameters,
)


def _criterion(num, description, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[criterion {num}] {description}: {status}{suffix}")
    assert ok, f"criterion {num} failed: {description}{suffix}"


def test_c1_oracle_equivalence_200_instances():
    rng = np.random.default_rng(1001)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(10, 61))
        k = int(rng.integers(1, 7))
        design = random_design(n, k, int(rng.integers(0, 2**31)))
        y = rng.standard_normal(n)
        fast = devian.studentized_residuals(devian.fit_ols(design, y))
        oracle = devian.studentized_residuals_oracle(design, y)
        worst = max(worst, float(np.max(np.abs(fast.values - oracle.values))))
    elapsed = time.perf_counter() - start
    _criterion(1, "fast residuals match leave-one-out refits on 200 instances",
               worst <= 1e-9 and elapsed < 10.0,
               f"max abs err {worst:.3g}, {elapsed:.2f}s")


def test_c2_invariance_exact_and_distributional():
    # Exact form: (y - M theta0) / sigma0 leaves every residual unchanged.
    rng = np.random.default_rng(2002)
    design = random_design(30, 3, 64)
    y = rng.standard_normal(30) * 5.0 - 2.0
    theta0 = np.array([100.0, -5.0, 3.0])
    sigma0 = 17.0
    base = devian.studentized_residuals(devian.fit_ols(design, y))
    moved = devian.studentized_residuals(
        devian.fit_ols(design, (y - design.entries @ theta0) / sigma0))
    exact_err = float(np.max(np.abs(base.values - moved.values)))

    # Distributional form: simulate under (0, 1); separately push
    # M theta + sigma epsilon responses through the statistic draw by draw.
    start = time.perf_counter()
    draws = 200_000
    config = devian.SimulationConfig(nsim=draws, seed=65)
    null = devian.simulate_null_distribution(design, config)
    alt = statistic_under_parameters(design, theta0, sigma0, draws, seed=66)
    elapsed = time.perf_counter() - start
    ks_p = float(ks_2samp(null.sorted_samples, alt).pvalue)
    _criterion(2, "parameter invariance, exact to 1e-9 and two-sample KS at 1e-3",
               exact_err <= 1e-9 and ks_p > 1e-3 and elapsed < 60.0,
               f"exact err {exact_err:.3g}, KS p {ks_p:.4g}, {elapsed:.1f}s")


@pytest.mark.parametrize("n,k,seed", [(10, 1, 3003), (30, 3, 3004)])
def test_c3_marginal_law_is_student(n, k, seed):
    design = random_design(n, k, seed)
    residuals = batched_null_residuals(design, 50_000, seed + 1)
    first = residuals[:, 0]
    p = float(kstest(first, "t", args=(n - k - 1,)).pvalue)
    _criterion(3, f"first residual is Student({n - k - 1}) over 5e4 null "
                  f"draws (n={n}, k={k})",
               p > 1e-3, f"KS p {p:.4g}")


def test_c4_zscore_reduces_to_last_studentized_residual():
    rng = np.random.default_rng(4004)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(5, 50))
        series = rng.standard_normal(n) * rng.uniform(0.5, 8.0) \
            + rng.uniform(-20.0, 20.0)
        design = devian.build_design(None, n_rows=n)
        res = devian.studentized_residuals(devian.fit_ols(design, series))
        worst = max(worst, abs(devian.zscore_last(series) - res.values[-1]))
    _criterion(4, "z-score equals the last intercept-only residual on 100 "
                  "random series",
               worst <= 1e-12, f"max abs err {worst:.3g}")


def test_c5_level_control_and_p_value_uniformity():
    design = random_design(30, 3, 5005)
    dist = devian.simulate_null_distribution(
        design, devian.SimulationConfig(nsim=20_000, seed=5006))
    threshold = devian.quantile(dist, 0.05)
    stats = batched_null_statistic(design, 2000, seed=5007)
    flag_rate = float(np.mean(stats > threshold))
    bound = 3.0 * np.sqrt(0.05 * 0.95 / 2000)
    pvals = np.array([devian.p_value(dist, t) for t in stats])
    ks_p = float(kstest(pvals, "uniform").pvalue)
    _criterion(5, "family-wise level held at alpha=0.05 and null p-values "
                  "uniform",
               abs(flag_rate - 0.05) <= bound and ks_p > 1e-3,
               f"flag rate {flag_rate:.4f} (bound +/-{bound:.4f}), "
               f"KS p {ks_p:.4g}")


def test_c6_determinism_across_worker_counts(tmp_path):
    rng = np.random.default_rng(6006)
    predictors = [rng.standard_normal(40)]
    y = 2.0 + 3.0 * predictors[0] + rng.standard_normal(40)
    y[11] += 5.0

    dists, payloads = [], []
    for workers in (1, 2, 6):
        result = devian.detect_abnormal_values(
            y, predictors, alpha=0.05, nsim=2000, seed=6007, workers=workers)
        dists.append(result.distribution.sorted_samples)
        out = tmp_path / f"workers{workers}.json"
        devian.write_report(result.report, "json", out)
        payloads.append(out.read_bytes())
    bitwise = (np.array_equal(dists[0], dists[1])
               and np.array_equal(dists[0], dists[2]))
    identical_reports = payloads[0] == payloads[1] == payloads[2]
    _criterion(6, "workers in {1, 2, 6} give bitwise-identical tabulation "
                  "and JSON report",
               bitwise and identical_reports)


def test_c7_fast_path_outruns_oracle():
    # Stated setting: n=5000, k=2, nsim=1000.  The fast pipeline runs in
    # full; oracle throughput is measured over 8 draws of the same
    # simulation loop (a complete nsim=1000 oracle run takes minutes) and
    # scaled to the same draw count.
    rng = np.random.default_rng(7007)
    x = rng.standard_normal(5000)
    y = 25.0 + 3.4 * x + 2.0 * rng.standard_normal(5000)

    start = time.perf_counter()
    devian.detect_abnormal_values(y, [x], alpha=0.05, nsim=1000, seed=7008)
    t_fast = time.perf_counter() - start

    design = devian.build_design([x])
    start = time.perf_counter()
    _simulate_range(design.factorization.q, design.leverages, design.entries,
                    7008, 0, 8, "oracle")
    t_oracle_est = (time.perf_counter() - start) / 8 * 1000

    sizes = [40, 80, 160]
    fast_sweep = run_benchmark("size", values=sizes, repeats=3, nsim=100)
    naive_sweep = run_benchmark("size", values=sizes, repeats=3, nsim=100,
                                naive=True)
    _criterion(7, "fast path at least 20x faster than oracle mode and "
                  "growth rate smaller",
               t_oracle_est >= 20.0 * t_fast
               and fast_sweep.rate < naive_sweep.rate,
               f"estimated ratio {t_oracle_est / t_fast:.0f}x, "
               f"r_fast {fast_sweep.rate:.3g} < r_naive {naive_sweep.rate:.3g}")


def test_c8_hand_checkable_values():
    design = devian.build_design(None, n_rows=4)
    symmetric = devian.studentized_residuals(
        devian.fit_ols(design, [-1.0, -1.0, 1.0, 1.0]))
    symmetric_oracle = devian.studentized_residuals_oracle(
        design, [-1.0, -1.0, 1.0, 1.0])
    shifted = devian.studentized_residuals(
        devian.fit_ols(design, [1.0, 2.0, 3.0, 10.0]))
    shifted_oracle = devian.studentized_residuals_oracle(
        design, [1.0, 2.0, 3.0, 10.0])

    ok = (np.allclose(symmetric.values, [-1, -1, 1, 1], atol=1e-12)
          and np.allclose(symmetric_oracle.values, [-1, -1, 1, 1], atol=1e-12)
          and devian.max_abs_residual(symmetric) == 1.0
          and abs(shifted.values[-1] - 4.0 * np.sqrt(3.0)) <= 1e-12
          and abs(shifted_oracle.values[-1] - 4.0 * np.sqrt(3.0)) <= 1e-12)
    _criterion(8, "hand-checkable residuals ([-1,-1,1,1] and 4*sqrt(3))", ok)


def test_c9_split_sample_quantile_consistency():
    design = random_design(30, 3, 9009)
    q, h = design.factorization.q, design.leverages
    half = 100_000
    raw = _simulate_range(q, h, design.entries, 9010, 0, 2 * half, "fast")

    def as_dist(values):
        return devian.EmpiricalNullDistribution(
            sorted_samples=np.sort(values),
            design_fingerprint=design.fingerprint,
            seed=9010, nsim=len(values))

    first, second = as_dist(raw[:half]), as_dist(raw[half:])
    ok = True
    details = []
    for alpha in (0.05, 0.2):
        q1 = devian.quantile(first, alpha)
        q2 = devian.quantile(second, alpha)
        se = np.hypot(devian.quantile_standard_error(first, alpha),
                      devian.quantile_standard_error(second, alpha))
        ok = ok and abs(q1 - q2) <= 3.0 * se
        details.append(f"alpha={alpha}: |{q1:.4f}-{q2:.4f}| <= 3*{se:.4f}")
    _criterion(9, "split-sample quantiles agree within 3 combined standard "
                  "errors", ok, "; ".join(details))
