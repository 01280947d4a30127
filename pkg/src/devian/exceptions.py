"""Exception hierarchy.

Two broad families matter to callers (and to the CLI exit-code contract):
``DataError`` for unusable input (files, shapes, values) and ``ModelError``
for data on which the linear model cannot be fitted or studentized.
"""


class DevianError(Exception):
    """Base class for all errors raised by this package."""


class DataError(DevianError):
    """Input cannot be used: bad file, bad shape, or bad values."""


class ModelError(DevianError):
    """The model cannot be fitted or studentized on this input."""


class NonFiniteInputError(DataError):
    """An input array contains NaN or infinite entries."""


class TooFewRowsError(DataError):
    """Fewer rows than the model requires (n must exceed k + 1)."""


class DimensionMismatchError(DataError):
    """Array shapes are inconsistent with each other."""


class MissingColumnError(DataError):
    """A named column is not present in the input file."""


class EmptyAfterDropError(DataError):
    """Too few complete rows remain after dropping missing values."""


class CsvParseError(DataError):
    """A cell could not be parsed; carries the offending location."""

    def __init__(self, message, row=None, column=None):
        super().__init__(message)
        self.row = row
        self.column = column


class RankDeficientError(ModelError):
    """Design columns are linearly dependent."""


class LeverageOneError(ModelError):
    """A leverage equals one: the row-deleted design is singular there."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class ZeroResidualVarianceError(ModelError):
    """A leave-one-out residual variance vanishes; studentization undefined."""


class ZeroVarianceError(ModelError):
    """A series has zero sample variance where positive variance is needed."""


class SimulationDegenerateError(DevianError):
    """A simulated draw had zero residual variance (internal error)."""


class FingerprintMismatchError(DevianError):
    """The null distribution was tabulated for a different design."""


class InsufficientSamplesError(DevianError):
    """Too few Monte-Carlo samples to bracket the requested quantile."""
