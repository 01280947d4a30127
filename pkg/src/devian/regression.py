"""Ordinary least squares with externally studentized residuals.

The design matrix always carries a leading intercept column, so ``k`` counts
*all* columns including the intercept and the residual degrees of freedom are
``n - k - 1``.  Each observation's residual is scaled by a variance estimate
that excludes that observation:

    s2_loo_i = ((n - k) * s2 - r_i**2 / (1 - h_i)) / (n - k - 1)
    e_i      = r_i / (s_loo_i * sqrt(1 - h_i))

where ``r`` are the ordinary residuals, ``h`` the leverages and ``s2`` the
full-model residual variance.  These downdating identities are algebraically
equal to refitting the model n times with one row deleted; the literal refit
lives in :func:`studentized_residuals_oracle` and the equality of the two
routes is enforced by the test suite to 1e-9.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from .exceptions import (
    DimensionMismatchError,
    LeverageOneError,
    RankDeficientError,
    TooFewRowsError,
    ZeroResidualVarianceError,
    ZeroVarianceError,
)
from .validation import as_float_vector, frozen, predictor_columns

# Leverage h_i >= 1 - LEVERAGE_TOL means the row-deleted design is singular
# at i (the model's standing assumption fails there).
LEVERAGE_TOL = 1e-10

# Rank is decided by a relative pivot threshold on the pivoted QR diagonal.
RANK_RTOL = 1e-10

# A residual scale below PERFECT_FIT_RTOL times the response scale is treated
# as an exact fit, for which studentization is undefined.
PERFECT_FIT_RTOL = 1e-13

# Cancellation floor for the leave-one-out variance downdate: values at or
# below this multiple of the full-model variance are rounding noise around 0.
_LOO_CANCEL_FACTOR = 32.0 * np.finfo(np.float64).eps


@dataclass(frozen=True)
class QRFactorization:
    """Economic column-pivoted QR factorization of the design matrix."""

    q: np.ndarray
    r: np.ndarray
    permutation: np.ndarray
    rank: int


@dataclass(frozen=True)
class DesignMatrix:
    """Full-rank n-by-k design whose first column is the intercept."""

    entries: np.ndarray
    factorization: QRFactorization

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def k(self) -> int:
        return self.entries.shape[1]

    @cached_property
    def leverages(self) -> np.ndarray:
        """Diagonal of the projection matrix, via row norms of Q."""
        q = self.factorization.q
        return frozen(np.einsum("ij,ij->i", q, q))

    @cached_property
    def fingerprint(self) -> str:
        """Content hash tying simulated distributions to this design."""
        digest = hashlib.sha256()
        digest.update(repr(self.entries.shape).encode())
        digest.update(np.ascontiguousarray(self.entries).tobytes())
        return digest.hexdigest()


@dataclass(frozen=True)
class FittedModel:
    """Least-squares fit artifacts for one (design, response) pair."""

    design: DesignMatrix
    response: np.ndarray
    coefficients: np.ndarray
    residuals: np.ndarray
    leverages: np.ndarray
    sigma2_hat: float


@dataclass(frozen=True)
class ResidualVector:
    """Externally studentized residuals with their degrees of freedom."""

    values: np.ndarray
    df: int

    def __len__(self) -> int:
        return len(self.values)


def build_design(predictors, n_rows: int | None = None) -> DesignMatrix:
    """Assemble the design matrix, always prepending an intercept column.

    Args:
        predictors: None, a 1-D column, an (n, p) array, or a sequence of
            length-n columns.  An empty predictor set yields the
            intercept-only design (``n_rows`` then supplies n).
        n_rows: Expected row count; required when ``predictors`` is empty.

    Returns:
        A full-rank :class:`DesignMatrix` with cached QR factorization.

    Raises:
        RankDeficientError: Columns are linearly dependent (including a
            constant predictor colliding with the intercept).
        TooFewRowsError: n <= k + 1, too few rows to studentize.
        NonFiniteInputError: Any predictor entry is NaN or infinite.
    """
    cols = predictor_columns(predictors, n_rows)
    n = n_rows if not cols else len(cols[0])
    if n is None or n < 1:
        raise TooFewRowsError("design needs at least one row")
    entries = np.column_stack([np.ones(n)] + cols)
    k = entries.shape[1]

    q, r, perm = scipy.linalg.qr(entries, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    rank = int(np.count_nonzero(diag > RANK_RTOL * diag[0])) if diag[0] > 0 else 0
    if rank < k:
        raise RankDeficientError(
            f"design columns are linearly dependent (rank {rank} < {k})"
        )
    if n <= k + 1:
        raise TooFewRowsError(
            f"need more than k + 1 = {k + 1} rows, got {n}"
        )
    return DesignMatrix(
        entries=frozen(entries),
        factorization=QRFactorization(q=frozen(q), r=frozen(r),
                                      permutation=frozen(perm), rank=rank),
    )


def fit_ols(design: DesignMatrix, response) -> FittedModel:
    """Fit ordinary least squares through the cached QR factorization.

    Returns the coefficient vector, residuals, leverages and the full-model
    residual variance ``sigma2_hat = sum(r_i**2) / (n - k)``.
    """
    y = as_float_vector(response, "response")
    if len(y) != design.n:
        raise DimensionMismatchError(
            f"response has length {len(y)}, design has {design.n} rows"
        )
    fac = design.factorization
    qty = fac.q.T @ y
    coef_pivoted = scipy.linalg.solve_triangular(fac.r, qty)
    coefficients = np.empty_like(coef_pivoted)
    coefficients[fac.permutation] = coef_pivoted
    residuals = y - fac.q @ qty
    rss = float(residuals @ residuals)
    sigma2_hat = rss / (design.n - design.k)
    return FittedModel(
        design=design,
        response=frozen(y),
        coefficients=frozen(coefficients),
        residuals=frozen(residuals),
        leverages=design.leverages,
        sigma2_hat=sigma2_hat,
    )


def _studentize_from_fit(residuals, leverages, sigma2, n, k, response_rms):
    """Shared fast-path kernel; assumes inputs come from one OLS fit."""
    high = np.nonzero(leverages >= 1.0 - LEVERAGE_TOL)[0]
    if high.size:
        raise LeverageOneError(
            f"leverage is 1 at index {high[0]}: deleting that row makes the "
            "design rank-deficient",
            index=int(high[0]),
        )
    if np.sqrt(sigma2) <= PERFECT_FIT_RTOL * response_rms:
        raise ZeroResidualVarianceError(
            "response is fitted exactly; studentization is undefined"
        )
    one_minus_h = 1.0 - leverages
    s2_loo = ((n - k) * sigma2 - residuals * residuals / one_minus_h) / (n - k - 1)
    floor = _LOO_CANCEL_FACTOR * (n - k) / (n - k - 1) * sigma2
    if np.any(s2_loo <= floor):
        raise ZeroResidualVarianceError(
            "a leave-one-out residual variance vanishes; studentization is "
            "undefined there"
        )
    return residuals / np.sqrt(s2_loo * one_minus_h)


def studentized_residuals(model: FittedModel) -> ResidualVector:
    """Externally studentized residuals via the downdating identities.

    Fast path: O(n k) given the fitted model, no refitting.  Values agree
    with :func:`studentized_residuals_oracle` to 1e-9 absolute.

    Raises:
        LeverageOneError: Some leverage reaches 1 (row-deleted design
            singular there).
        ZeroResidualVarianceError: A leave-one-out fit is exact, e.g. the
            response is exactly linear in the design.
    """
    n, k = model.design.n, model.design.k
    rms = float(np.sqrt(np.mean(model.response**2)))
    values = _studentize_from_fit(
        model.residuals, model.leverages, model.sigma2_hat, n, k, rms
    )
    return ResidualVector(values=frozen(values), df=n - k - 1)


def _oracle_studentize(entries: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Literal leave-one-out studentization: refit with each row deleted."""
    n, k = entries.shape
    values = np.empty(n)
    index = np.arange(n)
    for i in range(n):
        keep = index != i
        m_del = entries[keep]
        y_del = y[keep]
        theta, _, rank, _ = np.linalg.lstsq(m_del, y_del, rcond=None)
        if rank < k:
            raise LeverageOneError(
                f"row-deleted design is rank-deficient at index {i}", index=i
            )
        loo_residuals = y_del - m_del @ theta
        sigma2 = float(loo_residuals @ loo_residuals) / (n - k - 1)
        rms_del = float(np.sqrt(np.mean(y_del**2)))
        if np.sqrt(sigma2) <= PERFECT_FIT_RTOL * rms_del:
            raise ZeroResidualVarianceError(
                f"leave-one-out residual variance vanishes at index {i}"
            )
        gram = m_del.T @ m_del
        inflation = 1.0 + entries[i] @ np.linalg.solve(gram, entries[i])
        values[i] = (y[i] - entries[i] @ theta) / np.sqrt(sigma2 * inflation)
    return values


def studentized_residuals_oracle(design: DesignMatrix, response) -> ResidualVector:
    """Externally studentized residuals by refitting n row-deleted models.

    This is the definitional route: for each i it solves least squares on
    the design with row i removed, predicts observation i, estimates the
    noise variance from the remaining rows, and scales by the prediction
    standard error.  O(n^2 k^2); intended for verification and the CLI's
    oracle mode, not production use.
    """
    y = as_float_vector(response, "response")
    if len(y) != design.n:
        raise DimensionMismatchError(
            f"response has length {len(y)}, design has {design.n} rows"
        )
    values = _oracle_studentize(design.entries, y)
    return ResidualVector(values=frozen(values), df=design.n - design.k - 1)


def max_abs_residual(residuals) -> float:
    """The detection statistic: the largest absolute studentized residual."""
    values = residuals.values if isinstance(residuals, ResidualVector) else (
        np.asarray(residuals, dtype=np.float64)
    )
    if values.size == 0:
        raise ValueError("residual vector is empty")
    return float(np.max(np.abs(values)))


def zscore_last(series) -> float:
    """Z-score of the last observation against the preceding ones.

    For a series x_1..x_n this is (x_n - mean(x_1..x_{n-1})) divided by
    sd(x_1..x_{n-1}) * sqrt(1 + 1/(n-1)).  It equals the n-th studentized
    residual of the intercept-only model on the same series.

    Raises:
        TooFewRowsError: Fewer than 3 observations.
        ZeroVarianceError: The first n-1 observations are constant.
    """
    x = as_float_vector(series, "series")
    n = len(x)
    if n < 3:
        raise TooFewRowsError(f"need at least 3 observations, got {n}")
    head = x[:-1]
    mean = float(np.mean(head))
    sd = float(np.std(head, ddof=1))
    if sd <= PERFECT_FIT_RTOL * float(np.sqrt(np.mean(head**2))):
        raise ZeroVarianceError("first n-1 observations have zero variance")
    return (float(x[-1]) - mean) / (sd * np.sqrt(1.0 + 1.0 / (n - 1)))
