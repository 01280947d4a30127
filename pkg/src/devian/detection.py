"""Turn residuals plus a tabulated null law into an abnormal-value report."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .regression import (
    DesignMatrix,
    FittedModel,
    ResidualVector,
    build_design,
    fit_ols,
    max_abs_residual,
    studentized_residuals,
    studentized_residuals_oracle,
)
from .simulation import (
    EmpiricalNullDistribution,
    SimulationConfig,
    check_fingerprint,
    p_value,
    quantile,
    simulate_null_distribution,
)
from .validation import frozen


@dataclass(frozen=True)
class DetectionReport:
    """Everything the decision rule produced, ready for serialization.

    ``outlier_indices`` are 0-based positions in the fitted model;
    ``row_map`` translates positions to the original data-row numbers
    (1-based, as they stood before any rows were dropped).
    """

    residuals: ResidualVector
    response: np.ndarray
    t_obs: float
    threshold: float
    alpha: float
    p_value: float
    outlier_indices: np.ndarray
    outlier_values: np.ndarray
    seed: int
    nsim: int
    row_map: np.ndarray
    dropped_rows: tuple[int, ...] = ()

    @property
    def outlier_rows(self) -> np.ndarray:
        """Original data-row numbers of the flagged observations."""
        return self.row_map[self.outlier_indices]


def detect(
    model: FittedModel,
    dist: EmpiricalNullDistribution,
    alpha: float,
    method: str = "fast",
    row_map=None,
    dropped_rows: tuple[int, ...] = (),
) -> DetectionReport:
    """Flag the observations whose |studentized residual| exceeds the threshold.

    The threshold is the (1 - alpha) quantile of the tabulated null law;
    flagging uses strict inequality, so a residual exactly at the threshold
    is not an outlier.

    Raises:
        FingerprintMismatchError: ``dist`` was tabulated for another design.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    check_fingerprint(dist, model.design)
    if method == "oracle":
        residuals = studentized_residuals_oracle(model.design, model.response)
    else:
        residuals = studentized_residuals(model)
    threshold = quantile(dist, alpha)
    t_obs = max_abs_residual(residuals)
    indices = np.nonzero(np.abs(residuals.values) > threshold)[0]
    if row_map is None:
        row_map = np.arange(1, model.design.n + 1)
    row_map = np.asarray(row_map, dtype=np.int64)
    return DetectionReport(
        residuals=residuals,
        response=model.response,
        t_obs=t_obs,
        threshold=threshold,
        alpha=alpha,
        p_value=p_value(dist, t_obs),
        outlier_indices=frozen(indices),
        outlier_values=frozen(model.response[indices]),
        seed=dist.seed,
        nsim=dist.nsim,
        row_map=frozen(row_map),
        dropped_rows=tuple(dropped_rows),
    )


@dataclass(frozen=True)
class PipelineResult:
    """Bundle returned by the one-call pipeline."""

    report: DetectionReport
    distribution: EmpiricalNullDistribution
    model: FittedModel


def detect_abnormal_values(
    response,
    predictors=None,
    *,
    alpha: float = 0.2,
    nsim: int = 20000,
    seed: int = 0,
    workers: int = 1,
    method: str = "fast",
    row_map=None,
    dropped_rows: tuple[int, ...] = (),
) -> PipelineResult:
    """Run the full pipeline: fit, studentize, tabulate, threshold.

    Args:
        response: Observed values (length n).
        predictors: Explanatory columns; None for the intercept-only model.
        alpha: Risk level for the family-wise threshold.
        nsim: Monte-Carlo simulation count for the null tabulation.
        seed: Master seed; the tabulation is deterministic in it.
        workers: Processes used for the simulation (does not change results).
        method: "fast" or "oracle"; the oracle refits n row-deleted models
            per evaluation, including inside the simulation loop.
    """
    y = np.asarray(response, dtype=np.float64)
    design = build_design(predictors, n_rows=len(y))
    model = fit_ols(design, y)
    config = SimulationConfig(nsim=nsim, seed=seed, workers=workers, alpha=alpha)
    dist = simulate_null_distribution(design, config, method=method)
    report = detect(
        model, dist, alpha, method=method, row_map=row_map, dropped_rows=dropped_rows
    )
    return PipelineResult(report=report, distribution=dist, model=model)
