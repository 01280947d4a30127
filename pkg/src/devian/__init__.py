"""Detection of observations poorly explained by a Gaussian linear model.

The detector fits ordinary least squares, computes externally studentized
residuals, tabulates the null distribution of their maximum absolute value
by Monte-Carlo simulation conditional on the design, and flags every
observation beyond the (1 - alpha) quantile.  Because the residual vector's
law does not depend on the model's unknown coefficients or noise variance,
the simulated threshold is exact for the design at hand up to Monte-Carlo
error.
"""

from .benchmark import BenchmarkRecord, GrowthFit, fit_growth_rate, run_benchmark
from .dataio import Dataset, load_csv, report_to_dict, write_report
from .datasets import make_linear, make_wage_like
from .detection import (
    DetectionReport,
    PipelineResult,
    detect,
    detect_abnormal_values,
)
from .estimator import LinearOutlierDetector
from .exceptions import (
    CsvParseError,
    DataError,
    DevianError,
    DimensionMismatchError,
    EmptyAfterDropError,
    FingerprintMismatchError,
    InsufficientSamplesError,
    LeverageOneError,
    MissingColumnError,
    ModelError,
    NonFiniteInputError,
    RankDeficientError,
    SimulationDegenerateError,
    TooFewRowsError,
    ZeroResidualVarianceError,
    ZeroVarianceError,
)
from .figures import (
    render_null_histogram,
    render_residual_boxplot,
    render_residual_plot,
)
from .regression import (
    DesignMatrix,
    FittedModel,
    ResidualVector,
    build_design,
    fit_ols,
    max_abs_residual,
    studentized_residuals,
    studentized_residuals_oracle,
    zscore_last,
)
from .simulation import (
    EmpiricalNullDistribution,
    SimulationConfig,
    p_value,
    quantile,
    quantile_standard_error,
    simulate_null_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "BenchmarkRecord",
    "CsvParseError",
    "DataError",
    "Dataset",
    "DesignMatrix",
    "DetectionReport",
    "DevianError",
    "DimensionMismatchError",
    "EmpiricalNullDistribution",
    "EmptyAfterDropError",
    "FingerprintMismatchError",
    "FittedModel",
    "GrowthFit",
    "InsufficientSamplesError",
    "LeverageOneError",
    "LinearOutlierDetector",
    "MissingColumnError",
    "ModelError",
    "NonFiniteInputError",
    "PipelineResult",
    "RankDeficientError",
    "ResidualVector",
    "SimulationConfig",
    "SimulationDegenerateError",
    "TooFewRowsError",
    "ZeroResidualVarianceError",
    "ZeroVarianceError",
    "build_design",
    "detect",
    "detect_abnormal_values",
    "fit_growth_rate",
    "fit_ols",
    "load_csv",
    "make_linear",
    "make_wage_like",
    "max_abs_residual",
    "p_value",
    "quantile",
    "quantile_standard_error",
    "render_null_histogram",
    "render_residual_boxplot",
    "render_residual_plot",
    "report_to_dict",
    "run_benchmark",
    "simulate_null_distribution",
    "studentized_residuals",
    "studentized_residuals_oracle",
    "write_report",
    "zscore_last",
]
