"""Scikit-learn style front-end for the abnormal-value detector."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, OutlierMixin

from .detection import detect_abnormal_values


class LinearOutlierDetector(BaseEstimator, OutlierMixin):
    """Flag observations poorly explained by a Gaussian linear model.

    ``fit(X, y)`` regresses y on X (an intercept is always added), computes
    the externally studentized residuals, tabulates the null distribution of
    their maximum absolute value by Monte-Carlo simulation conditional on
    the design, and flags every observation whose absolute residual exceeds
    the (1 - alpha) quantile.  The threshold is family-wise: under the
    model, the probability of flagging anything at all is alpha.

    Parameters:
        alpha: Risk level of the family-wise threshold.
        nsim: Monte-Carlo draws used to tabulate the null distribution.
        seed: Master seed; None draws a fresh one (recorded in ``seed_``).
        workers: Processes for the simulation; never changes the result.
        method: "fast" (downdating identities) or "oracle" (literal
            leave-one-out refits, slow, for verification).

    Attributes (after fit):
        residuals_: Externally studentized residuals, shape (n,).
        statistic_: Their maximum absolute value.
        threshold_: The (1 - alpha) null quantile for this design.
        p_value_: Monte-Carlo p-value of ``statistic_``.
        outlier_indices_: 0-based indices of flagged observations.
        labels_: +1 inlier / -1 outlier per observation.
        report_: The full :class:`~devian.detection.DetectionReport`.
        null_distribution_: The tabulated null sample.
        seed_: The seed actually used.
    """

    def __init__(self, alpha: float = 0.2, nsim: int = 20000,
                 seed: int | None = None, workers: int = 1,
                 method: str = "fast"):
        self.alpha = alpha
        self.nsim = nsim
        self.seed = seed
        self.workers = workers
        self.method = method

    def fit(self, X, y):
        """Fit the linear model on (X, y) and run the detection pipeline.

        Args:
            X: Predictors, shape (n, p), a single column, or None for the
                intercept-only model.
            y: Response values, shape (n,).

        Returns:
            self
        """
        y = np.asarray(y, dtype=np.float64)
        seed = self.seed
        if seed is None:
            seed = int(np.random.SeedSequence().entropy) & (2**64 - 1)
        result = detect_abnormal_values(
            y,
            X,
            alpha=self.alpha,
            nsim=self.nsim,
            seed=seed,
            workers=self.workers,
            method=self.method,
        )
        report = result.report
        self.report_ = report
        self.model_ = result.model
        self.null_distribution_ = result.distribution
        self.residuals_ = report.residuals.values
        self.statistic_ = report.t_obs
        self.threshold_ = report.threshold
        self.p_value_ = report.p_value
        self.outlier_indices_ = report.outlier_indices
        labels = np.ones(len(y), dtype=int)
        labels[report.outlier_indices] = -1
        self.labels_ = labels
        self.seed_ = seed
        self.n_features_in_ = result.model.design.k - 1
        return self

    def fit_predict(self, X, y=None):
        """Fit on (X, y) and return +1/-1 inlier/outlier labels."""
        if y is None:
            raise ValueError("y (the response) is required")
        return self.fit(X, y).labels_
