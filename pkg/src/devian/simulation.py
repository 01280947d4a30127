"""Monte-Carlo tabulation of the null law of the max studentized residual.

Conditionally on the design, the joint law of the studentized residuals does
not depend on the model's coefficient vector or noise variance, so the null
can be simulated with standard-normal responses.  Each draw has its own
counter-keyed Philox stream derived from (master seed, draw index), which
makes the tabulated sample a pure function of (design, seed, nsim): worker
count and scheduling never change a single bit of the result.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .exceptions import (
    FingerprintMismatchError,
    InsufficientSamplesError,
    LeverageOneError,
    SimulationDegenerateError,
    ZeroResidualVarianceError,
)
from .regression import (
    LEVERAGE_TOL,
    DesignMatrix,
    _oracle_studentize,
    _studentize_from_fit,
)
from .validation import frozen

_MAX_SEED = 2**64


@dataclass(frozen=True)
class SimulationConfig:
    """Knobs of the Monte-Carlo tabulation.

    ``alpha`` rides along so one object carries the full request
    (risk level, simulation count, seed, worker count).
    """

    nsim: int = 20000
    seed: int = 0
    workers: int = 1
    alpha: float = 0.2

    def __post_init__(self):
        if self.nsim < 100:
            raise ValueError(f"nsim must be at least 100, got {self.nsim}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        if not 0 <= self.seed < _MAX_SEED:
            raise ValueError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True)
class EmpiricalNullDistribution:
    """Sorted Monte-Carlo sample of the statistic under the null."""

    sorted_samples: np.ndarray
    design_fingerprint: str
    seed: int
    nsim: int

    def __post_init__(self):
        samples = self.sorted_samples
        if len(samples) != self.nsim:
            raise ValueError("nsim does not match the number of samples")
        if not np.all(np.isfinite(samples)) or np.any(samples <= 0):
            raise ValueError("samples must be positive and finite")
        if np.any(np.diff(samples) < 0):
            raise ValueError("samples must be sorted ascending")


def _rewind(bit_generator, draw_index: int) -> None:
    """Point the Philox counter at the start of one draw's stream."""
    state = bit_generator.state
    state["state"]["counter"][:] = 0
    state["state"]["counter"][1] = draw_index
    state["buffer_pos"] = 4
    state["has_uint32"] = 0
    state["uinteger"] = 0
    bit_generator.state = state


def draw_rng(seed: int, draw_index: int) -> np.random.Generator:
    """Fresh generator for one draw's stream (reference construction).

    The simulation loop reuses a single Philox object and rewinds its
    counter, which yields bit-identical output; this constructor defines
    the stream and is what the tests compare against.
    """
    return np.random.Generator(
        np.random.Philox(key=seed, counter=draw_index << 64)
    )


def _simulate_range(q, h, entries, seed, start, stop, method):
    """Compute the statistic for draws [start, stop); used by workers too."""
    n, k = (entries.shape if method == "oracle" else q.shape)
    bit_generator = np.random.Philox(key=seed)
    rng = np.random.Generator(bit_generator)
    one_minus_h = None if method == "oracle" else 1.0 - h
    out = np.empty(stop - start)
    for j in range(start, stop):
        _rewind(bit_generator, j)
        y = rng.standard_normal(n)
        try:
            if method == "oracle":
                e = _oracle_studentize(entries, y)
            else:
                qty = q.T @ y
                residuals = y - q @ qty
                sigma2 = float(residuals @ residuals) / (n - k)
                rms = float(np.sqrt(np.mean(y**2)))
                e = _studentize_from_fit(residuals, h, sigma2, n, k, rms)
        except (ZeroResidualVarianceError, LeverageOneError) as exc:
            raise SimulationDegenerateError(
                f"draw {j} produced a degenerate fit: {exc}"
            ) from exc
        out[j - start] = np.max(np.abs(e))
    return out


def simulate_null_distribution(
    design: DesignMatrix,
    config: SimulationConfig,
    method: str = "fast",
) -> EmpiricalNullDistribution:
    """Tabulate the null distribution of the statistic for one design.

    Args:
        design: The design matrix the statistic is conditioned on.
        config: Simulation count, master seed and worker count.
        method: "fast" for the downdating identities, "oracle" for the
            literal row-deletion refits (slow; verification only).

    Returns:
        The sorted sample, fingerprinted against the design.  Deterministic
        in (design, seed, nsim) for any worker count.
    """
    if method not in ("fast", "oracle"):
        raise ValueError(f"unknown method {method!r}")
    q = design.factorization.q
    h = design.leverages
    # A unit leverage is a property of the design: every draw would fail.
    high = np.nonzero(h >= 1.0 - LEVERAGE_TOL)[0]
    if high.size:
        raise LeverageOneError(
            f"leverage is 1 at index {high[0]}: the null distribution is "
            "undefined for this design",
            index=int(high[0]),
        )
    entries = design.entries
    nsim, seed = config.nsim, config.seed

    workers = min(config.workers, max(1, nsim // 100))
    if workers == 1:
        samples = _simulate_range(q, h, entries, seed, 0, nsim, method)
    else:
        bounds = np.linspace(0, nsim, workers + 1, dtype=int)
        tasks = [
            (q, h, entries, seed, int(a), int(b), method)
            for a, b in zip(bounds[:-1], bounds[1:])
        ]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_simulate_range_star, tasks))
        samples = np.concatenate(chunks)

    samples.sort()
    return EmpiricalNullDistribution(
        sorted_samples=frozen(samples),
        design_fingerprint=design.fingerprint,
        seed=seed,
        nsim=nsim,
    )


def _simulate_range_star(args):
    return _simulate_range(*args)


def quantile(dist: EmpiricalNullDistribution, alpha: float) -> float:
    """Order-statistic estimate of the (1 - alpha) quantile.

    Uses rank ceil((1 - alpha) * nsim), no interpolation.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    rank = math.ceil((1.0 - alpha) * dist.nsim)
    return float(dist.sorted_samples[rank - 1])


def p_value(dist: EmpiricalNullDistribution, t_obs: float) -> float:
    """Monte-Carlo p-value (1 + #{samples >= t_obs}) / (nsim + 1).

    Ties count as exceedances and the +1 smoothing keeps the value in
    (0, 1], both conservative choices.
    """
    if not np.isfinite(t_obs):
        raise ValueError("observed statistic must be finite")
    exceed = dist.nsim - int(
        np.searchsorted(dist.sorted_samples, t_obs, side="left")
    )
    return (1 + exceed) / (dist.nsim + 1)


def quantile_standard_error(dist: EmpiricalNullDistribution, alpha: float) -> float:
    """Monte-Carlo standard error of the quantile, by the binomial method.

    Brackets the target rank nsim * (1 - alpha) at +/- z_0.975 binomial
    standard deviations and returns half the spread of the corresponding
    order statistics.

    Raises:
        InsufficientSamplesError: The bracketing ranks fall outside the
            sample (alpha too extreme for this nsim).
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    nsim = dist.nsim
    center = nsim * (1.0 - alpha)
    spread = norm.ppf(0.975) * math.sqrt(nsim * alpha * (1.0 - alpha))
    rank_lo = math.floor(center - spread)
    rank_hi = math.ceil(center + spread)
    if rank_lo < 1 or rank_hi > nsim:
        raise InsufficientSamplesError(
            f"cannot bracket the {1 - alpha:g} quantile with {nsim} samples"
        )
    samples = dist.sorted_samples
    return float(samples[rank_hi - 1] - samples[rank_lo - 1]) / 2.0


def check_fingerprint(dist: EmpiricalNullDistribution, design: DesignMatrix) -> None:
    """Refuse to mix a tabulation with a design it was not generated from."""
    if dist.design_fingerprint != design.fingerprint:
        raise FingerprintMismatchError(
            "null distribution was tabulated for a different design"
        )
