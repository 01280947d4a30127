"""Runtime benchmark: sweep sample size or simulation count, fit a growth rate.

Each sweep point times the full detection pipeline (fit, tabulate, threshold)
``repeats`` times with a monotonic clock after one untimed warm-up run, and
keeps the median.  A least-squares line ``runtime = rate * x + intercept``
summarizes the scaling; the slope's t-statistic, p-value, RMSE and adjusted
R-squared are reported alongside.
"""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

import numpy as np
from scipy.stats import t as student_t

from .datasets import make_linear, make_wage_like, response_and_predictors
from .detection import detect_abnormal_values

# Fixed seeds: benchmark datasets and simulations are reproducible runs.
_BENCH_DATA_SEED = 20241
_BENCH_SIM_SEED = 777

DEFAULT_SIZE_VALUES = (100, 500, 1_000, 5_000, 10_000, 100_000)
DEFAULT_NSIM_VALUES = (100, 500, 1_000, 5_000, 10_000, 15_000, 20_000, 25_000)
DEFAULT_SIZE_REPEATS = 200
DEFAULT_NSIM_REPEATS = 100
DEFAULT_SIZE_SWEEP_NSIM = 200


@dataclass(frozen=True)
class GrowthFit:
    """Least-squares line through (sweep value, median runtime) points."""

    rate: float
    intercept: float
    r2: float
    t_stat: float
    p_value: float
    rmse: float


@dataclass(frozen=True)
class BenchmarkRecord:
    """One sweep's measurements plus the fitted growth rate."""

    sweep_kind: str
    sweep_values: tuple[int, ...]
    median_runtimes_s: tuple[float, ...]
    repeats: int
    rate: float
    intercept: float
    r2: float
    rate_t_stat: float
    rate_p_value: float
    rmse: float
    method: str
    workers: int


def fit_growth_rate(x, y) -> GrowthFit:
    """Fit runtime = rate * x + intercept by ordinary least squares.

    Exact on exactly linear points; the slope's t-statistic is +/-inf and
    its p-value 0 when the fit is perfect.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("need at least two (x, y) points of equal length")
    m = len(x)
    x_mean, y_mean = x.mean(), y.mean()
    sxx = float(np.sum((x - x_mean) ** 2))
    if sxx == 0.0:
        raise ValueError("sweep values are constant; slope undefined")
    rate = float(np.sum((x - x_mean) * (y - y_mean))) / sxx
    intercept = float(y_mean - rate * x_mean)
    fitted = rate * x + intercept
    rss = float(np.sum((y - fitted) ** 2))
    tss = float(np.sum((y - y_mean) ** 2))
    if m > 2:
        mse = rss / (m - 2)
        rmse = float(np.sqrt(mse))
        se = float(np.sqrt(mse / sxx))
        if se > 0:
            t_stat = rate / se
            p_val = 2.0 * float(student_t.sf(abs(t_stat), m - 2))
        else:
            t_stat = float(np.inf) if rate >= 0 else float(-np.inf)
            p_val = 0.0
        r2 = 1.0 - (rss / (m - 2)) / (tss / (m - 1)) if tss > 0 else 1.0
    else:
        rmse, t_stat, p_val = 0.0, float(np.nan), float(np.nan)
        r2 = 1.0
    return GrowthFit(rate=rate, intercept=intercept, r2=r2,
                     t_stat=t_stat, p_value=p_val, rmse=rmse)


def _pipeline_once(response, predictors, nsim, workers, method):
    detect_abnormal_values(
        response,
        predictors,
        alpha=0.05,
        nsim=nsim,
        seed=_BENCH_SIM_SEED,
        workers=workers,
        method=method,
    )


def time_pipeline(
    response, predictors, nsim: int, repeats: int, workers: int, method: str
) -> float:
    """Median wall-clock seconds over ``repeats`` runs, after one warm-up."""
    _pipeline_once(response, predictors, nsim, workers, method)
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        _pipeline_once(response, predictors, nsim, workers, method)
        times.append(time.perf_counter() - start)
    return statistics.median(times)


def run_benchmark(
    sweep_kind: str,
    values=None,
    repeats: int | None = None,
    *,
    workers: int = 1,
    naive: bool = False,
    nsim: int = DEFAULT_SIZE_SWEEP_NSIM,
) -> BenchmarkRecord:
    """Measure the pipeline across a sweep and fit the growth rate.

    Args:
        sweep_kind: "size" sweeps the sample size of a fresh linear dataset
            at a fixed simulation count; "nsim" sweeps the simulation count
            on a fixed wage-like dataset.
        values: Strictly increasing sweep values (defaults per sweep kind).
        repeats: Timed repetitions per point (defaults: 200 size / 100 nsim).
        naive: Benchmark the literal leave-one-out path instead of the
            fast identities.
        nsim: Simulation count used at every point of the size sweep.
    """
    if sweep_kind not in ("size", "nsim"):
        raise ValueError(f"unknown sweep kind {sweep_kind!r}")
    if values is None:
        values = DEFAULT_SIZE_VALUES if sweep_kind == "size" else DEFAULT_NSIM_VALUES
    values = tuple(int(v) for v in values)
    if len(values) < 2 or any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("sweep values must be strictly increasing, >= 2 of them")
    if repeats is None:
        repeats = DEFAULT_SIZE_REPEATS if sweep_kind == "size" else DEFAULT_NSIM_REPEATS
    if repeats < 1:
        raise ValueError("repeats must be positive")
    method = "oracle" if naive else "fast"

    medians = []
    if sweep_kind == "size":
        for n in values:
            columns = make_linear(n, seed=_BENCH_DATA_SEED)
            response, predictors = response_and_predictors(columns)
            medians.append(time_pipeline(
                response, predictors, nsim, repeats, workers, method
            ))
    else:
        columns = make_wage_like(seed=_BENCH_DATA_SEED)
        response, predictors = response_and_predictors(columns)
        for count in values:
            medians.append(time_pipeline(
                response, predictors, count, repeats, workers, method
            ))

    fit = fit_growth_rate(values, medians)
    return BenchmarkRecord(
        sweep_kind=sweep_kind,
        sweep_values=values,
        median_runtimes_s=tuple(medians),
        repeats=repeats,
        rate=fit.rate,
        intercept=fit.intercept,
        r2=fit.r2,
        rate_t_stat=fit.t_stat,
        rate_p_value=fit.p_value,
        rmse=fit.rmse,
        method=method,
        workers=workers,
    )
