"""Shared test helpers.

``batched_null_residuals`` is an independent, vectorized route to simulated
studentized residuals under the null; distribution-level tests compare the
production code against it rather than against itself.
"""

from __future__ import annotations

import numpy as np

import devian


def random_design(n: int, k: int, seed: int) -> devian.DesignMatrix:
    """Gaussian design with k columns total (intercept plus k-1 predictors)."""
    rng = np.random.default_rng(seed)
    predictors = [rng.standard_normal(n) for _ in range(k - 1)]
    return devian.build_design(predictors, n_rows=n)


def batched_null_residuals(design: devian.DesignMatrix, draws: int,
                           seed: int) -> np.ndarray:
    """(draws, n) studentized residuals for standard-normal responses.

    Vectorized across draws with a bulk RNG; intentionally a different code
    path from the production per-draw simulation loop.
    """
    n, k = design.n, design.k
    q = design.factorization.q
    h = design.leverages
    rng = np.random.default_rng(seed)
    y = rng.standard_normal((draws, n))
    qty = y @ q
    residuals = y - qty @ q.T
    rss = np.einsum("ij,ij->i", residuals, residuals)
    s2 = rss / (n - k)
    one_minus_h = 1.0 - h
    s2_loo = ((n - k) * s2[:, None] - residuals**2 / one_minus_h) / (n - k - 1)
    return residuals / np.sqrt(s2_loo * one_minus_h)


def batched_null_statistic(design: devian.DesignMatrix, draws: int,
                           seed: int) -> np.ndarray:
    """Max |studentized residual| per draw, via the batched route."""
    return np.max(np.abs(batched_null_residuals(design, draws, seed)), axis=1)


def statistic_under_parameters(design: devian.DesignMatrix, theta, sigma: float,
                               draws: int, seed: int) -> np.ndarray:
    """Statistic samples for responses M theta + sigma * noise, draw by draw.

    Exercises the full statistic computation on each generated response;
    used to check that the simulated null does not depend on (theta, sigma).
    """
    q = design.factorization.q
    h = design.leverages
    one_minus_h = 1.0 - h
    n, k = design.n, design.k
    mean = design.entries @ np.asarray(theta, dtype=np.float64)
    rng = np.random.default_rng(seed)
    out = np.empty(draws)
    for i in range(draws):
        y = mean + sigma * rng.standard_normal(n)
        qty = q.T @ y
        r = y - q @ qty
        s2 = float(r @ r) / (n - k)
        s2_loo = ((n - k) * s2 - r * r / one_minus_h) / (n - k - 1)
        out[i] = np.max(np.abs(r / np.sqrt(s2_loo * one_minus_h)))
    return out
