"""Synthetic dataset generators for benchmarking and examples."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .exceptions import TooFewRowsError

WAGE_LIKE_DEFAULT_ROWS = 599


def make_linear(
    n: int,
    seed: int = 0,
    *,
    slope: float = 3.4,
    intercept: float = 25.0,
    noise_sd: float = 2.0,
) -> dict[str, np.ndarray]:
    """Simple linear benchmark data: y = intercept + slope * x + noise.

    x is standard normal and the noise has standard deviation ``noise_sd``
    (2.0 by default).
    """
    if n <= 3:
        raise TooFewRowsError(
            f"linear model has 2 design columns, need n > 3, got {n}"
        )
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    y = intercept + slope * x + noise_sd * rng.standard_normal(n)
    return {"x": x, "y": y}


def make_wage_like(
    n: int = WAGE_LIKE_DEFAULT_ROWS, seed: int = 0
) -> dict[str, np.ndarray]:
    """Survey-shaped data: log wage against age, education and children.

    Mimics the shape of a wage sample: integer-valued covariates and a
    log-scale response with moderate noise.
    """
    if n <= 5:
        raise TooFewRowsError(
            f"wage-like model has 4 design columns, need n > 5, got {n}"
        )
    rng = np.random.default_rng(seed)
    age = rng.integers(18, 66, size=n).astype(np.float64)
    education = rng.integers(8, 21, size=n).astype(np.float64)
    children = rng.poisson(1.0, size=n).astype(np.float64)
    log_wage = (
        1.1
        + 0.012 * age
        + 0.085 * education
        - 0.03 * children
        + 0.45 * rng.standard_normal(n)
    )
    return {"age": age, "education": education, "children": children,
            "log_wage": log_wage}


def make_dataset(model: str, n: int, seed: int = 0) -> dict[str, np.ndarray]:
    """Dispatch on the model name ("linear" or "wage-like")."""
    if model == "linear":
        return make_linear(n, seed)
    if model == "wage-like":
        return make_wage_like(n, seed)
    raise ValueError(f"unknown synthetic model {model!r}")


def response_and_predictors(columns: dict[str, np.ndarray]):
    """Split generated columns into (response, predictor columns).

    The response is "y" for the linear model and "log_wage" for the
    wage-like model; everything else is a predictor.
    """
    for name in ("y", "log_wage"):
        if name in columns:
            response = columns[name]
            predictors = [v for k, v in columns.items() if k != name]
            return response, predictors
    raise ValueError("columns carry no recognized response")


def write_columns_csv(columns: dict[str, np.ndarray], path) -> None:
    """Write named columns as a headed CSV with 17-significant-digit reals."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(columns)
    length = len(columns[names[0]])
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(names)
        for i in range(length):
            writer.writerow([format(float(columns[c][i]), ".17g")
                             for c in names])
