import numpy as np
import pytest

import devian

from conftest import random_design


def _pipeline(y, predictors=None, alpha=0.2, nsim=2000, seed=5, **kwargs):
    return devian.detect_abnormal_values(
        y, predictors, alpha=alpha, nsim=nsim, seed=seed, **kwargs)


class TestDetect:
    def test_flags_empty_iff_statistic_below_threshold(self):
        rng = np.random.default_rng(0)
        design = random_design(30, 3, 1)
        y = design.entries @ np.array([1.0, 2.0, -1.0]) + rng.standard_normal(30)
        model = devian.fit_ols(design, y)
        dist = devian.simulate_null_distribution(
            design, devian.SimulationConfig(nsim=5000, seed=2))
        for alpha in (0.001, 0.2, 0.9):
            report = devian.detect(model, dist, alpha)
            assert (len(report.outlier_indices) == 0) == (
                report.t_obs <= report.threshold)

    def test_gross_outlier_flagged(self):
        result = _pipeline([0.1, -0.2, 0.05, 8.0], alpha=0.05, nsim=20000,
                           seed=123)
        assert list(result.report.outlier_indices) == [3]
        assert list(result.report.outlier_values) == [8.0]
        assert list(result.report.outlier_rows) == [4]

    def test_flag_set_matches_threshold_rule_exactly(self):
        rng = np.random.default_rng(9)
        design = random_design(40, 4, 3)
        y = rng.standard_normal(40)
        y[7] += 6.0
        model = devian.fit_ols(design, y)
        dist = devian.simulate_null_distribution(
            design, devian.SimulationConfig(nsim=3000, seed=4))
        report = devian.detect(model, dist, 0.1)
        expected = np.nonzero(
            np.abs(report.residuals.values) > report.threshold)[0]
        assert np.array_equal(report.outlier_indices, expected)
        assert report.t_obs == devian.max_abs_residual(report.residuals)

    def test_outlier_sets_nested_in_alpha(self):
        rng = np.random.default_rng(11)
        design = random_design(25, 2, 12)
        y = rng.standard_normal(25)
        y[3] += 4.0
        y[17] -= 3.0
        model = devian.fit_ols(design, y)
        dist = devian.simulate_null_distribution(
            design, devian.SimulationConfig(nsim=4000, seed=13))
        previous = set()
        for alpha in (0.01, 0.05, 0.1, 0.2):
            flagged = set(devian.detect(model, dist, alpha).outlier_indices.tolist())
            assert previous <= flagged
            previous = flagged

    def test_decision_consistent_with_p_value(self):
        # sign(t - c) agrees exactly with p <= alpha', where alpha' is the
        # smoothed mass strictly above the threshold sample.
        design = random_design(20, 2, 21)
        dist = devian.simulate_null_distribution(
            design, devian.SimulationConfig(nsim=1000, seed=22))
        rng = np.random.default_rng(23)
        for trial in range(50):
            y = rng.standard_normal(20)
            if trial % 3 == 0:
                y[int(rng.integers(0, 20))] += rng.uniform(0.0, 6.0)
            model = devian.fit_ols(design, y)
            report = devian.detect(model, dist, 0.1)
            above = int(np.sum(dist.sorted_samples > report.threshold))
            alpha_prime = (1 + above) / (dist.nsim + 1)
            assert (report.t_obs > report.threshold) == (
                report.p_value <= alpha_prime)

    def test_fingerprint_mismatch_rejected(self):
        design_a = random_design(15, 2, 31)
        design_b = random_design(15, 2, 32)
        model = devian.fit_ols(design_a, np.arange(15, dtype=float) ** 1.1)
        dist = devian.simulate_null_distribution(
            design_b, devian.SimulationConfig(nsim=200, seed=33))
        with pytest.raises(devian.FingerprintMismatchError):
            devian.detect(model, dist, 0.1)

    def test_row_map_translates_indices(self):
        result = _pipeline([0.1, -0.2, 0.05, 8.0], alpha=0.05, nsim=20000,
                           seed=123, row_map=[2, 3, 5, 9],
                           dropped_rows=(1, 4))
        report = result.report
        assert list(report.outlier_rows) == [9]
        assert report.dropped_rows == (1, 4)

    def test_oracle_method_same_flags(self):
        y = [0.4, -0.2, 0.3, 0.1, -0.5, 6.0, 0.2, -0.1]
        fast = _pipeline(y, alpha=0.05, nsim=1000, seed=77, method="fast")
        oracle = _pipeline(y, alpha=0.05, nsim=1000, seed=77, method="oracle")
        assert np.array_equal(fast.report.outlier_indices,
                              oracle.report.outlier_indices)
        assert np.max(np.abs(fast.report.residuals.values
                             - oracle.report.residuals.values)) <= 1e-9

    def test_alpha_validated(self):
        design = random_design(15, 2, 41)
        model = devian.fit_ols(design, np.arange(15, dtype=float) ** 1.2)
        dist = devian.simulate_null_distribution(
            design, devian.SimulationConfig(nsim=200, seed=42))
        with pytest.raises(ValueError):
            devian.detect(model, dist, 1.5)


class TestFamilyWiseLevel:
    def test_null_flag_rate_close_to_alpha(self):
        design = random_design(20, 2, 50)
        dist = devian.simulate_null_distribution(
            design, devian.SimulationConfig(nsim=20000, seed=51))
        threshold = devian.quantile(dist, 0.05)
        rng = np.random.default_rng(52)
        trials = 2000
        flags = 0
        for _ in range(trials):
            y = rng.standard_normal(20)
            res = devian.studentized_residuals(devian.fit_ols(design, y))
            if devian.max_abs_residual(res) > threshold:
                flags += 1
        rate = flags / trials
        bound = 3.0 * np.sqrt(0.05 * 0.95 / trials)
        assert abs(rate - 0.05) <= bound
