"""Input validation helpers shared by the public entry points.

Non-finite values are rejected at the boundary rather than propagated.
"""

from __future__ import annotations

import numpy as np

from .exceptions import DimensionMismatchError, NonFiniteInputError


def as_float_vector(values, name: str = "values") -> np.ndarray:
    """Coerce to a finite 1-D float64 array, copying the input."""
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != 1:
        raise DimensionMismatchError(
            f"{name} must be one-dimensional, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise NonFiniteInputError(f"{name} contains NaN or infinite entries")
    return arr


def predictor_columns(predictors, n_rows: int | None = None) -> list[np.ndarray]:
    """Normalize predictor input into a list of equal-length finite columns.

    Accepts None or an empty sequence (no predictors, needs ``n_rows``),
    a single 1-D column, a 2-D array whose columns are predictors, or a
    sequence of 1-D columns.
    """
    if predictors is None:
        cols = []
    else:
        try:
            arr = np.asarray(predictors, dtype=np.float64)
        except ValueError as exc:
            raise DimensionMismatchError(
                f"predictor columns have unequal lengths ({exc})"
            ) from None
        if arr.size == 0:
            cols = []
        elif arr.ndim == 1:
            cols = [as_float_vector(arr, "predictor")]
        elif arr.ndim == 2:
            # A bare 2-D array is (n_rows, n_predictors); a list of columns
            # arrives as (n_predictors, n_rows) and is handled below.
            if isinstance(predictors, np.ndarray):
                cols = [as_float_vector(arr[:, j], f"predictor {j}")
                        for j in range(arr.shape[1])]
            else:
                cols = [as_float_vector(col, f"predictor {j}")
                        for j, col in enumerate(predictors)]
        else:
            raise DimensionMismatchError(
                f"predictors must be at most two-dimensional, got shape {arr.shape}"
            )

    if not cols:
        if n_rows is None:
            raise DimensionMismatchError(
                "n_rows is required when no predictors are given"
            )
        return []

    lengths = {len(c) for c in cols}
    if len(lengths) != 1:
        raise DimensionMismatchError(
            f"predictor columns have unequal lengths {sorted(lengths)}"
        )
    if n_rows is not None and len(cols[0]) != n_rows:
        raise DimensionMismatchError(
            f"predictor columns have length {len(cols[0])}, expected {n_rows}"
        )
    return cols


def frozen(arr: np.ndarray) -> np.ndarray:
    """Mark an array read-only so stored state stays immutable."""
    arr.setflags(write=False)
    return arr
