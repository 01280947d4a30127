"""CSV ingestion and report serialization.

Ingestion is listwise: any row with a missing ("NA" or empty) or non-finite
value in a used column is dropped and its original 1-based data-row number
recorded.  Transforms (log / square / pow<k>) are applied before the drop, so
e.g. the log of a nonpositive value also drops the row.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .detection import DetectionReport
from .exceptions import (
    CsvParseError,
    EmptyAfterDropError,
    MissingColumnError,
)
from .validation import frozen

_MISSING = {"", "NA"}
_POW_TAG = re.compile(r"^pow(\d+)$")


@dataclass(frozen=True)
class Dataset:
    """Complete-case data ready for model building."""

    response: np.ndarray
    predictors: dict[str, np.ndarray]
    response_name: str
    row_map: np.ndarray
    dropped_rows: tuple[int, ...]
    source_path: str

    @property
    def n(self) -> int:
        return len(self.response)

    def predictor_matrix(self) -> list[np.ndarray]:
        return list(self.predictors.values())


def _parse_cell(text: str, row: int, column: str) -> float:
    value = text.strip()
    if value in _MISSING:
        return np.nan
    try:
        return float(value)
    except ValueError:
        raise CsvParseError(
            f"cannot parse {value!r} as a number (row {row}, column {column!r})",
            row=row,
            column=column,
        ) from None


def _apply_transform(name: str, tag: str, column: np.ndarray):
    """Return (new_name, values, replaces_original).

    "log" replaces the column; "square" (alias "pow2") and "pow<k>" add a
    power column alongside the original.
    """
    if tag == "log":
        with np.errstate(invalid="ignore", divide="ignore"):
            return f"log({name})", np.log(column), True
    if tag == "square":
        tag = "pow2"
    match = _POW_TAG.match(tag)
    if match:
        exponent = int(match.group(1))
        with np.errstate(over="ignore"):
            return f"{name}^{exponent}", column**exponent, False
    raise ValueError(f"unknown transform tag {tag!r} for column {name!r}")


def load_csv(
    path,
    response_col: str,
    predictor_cols=(),
    transform_spec: dict[str, str] | None = None,
) -> Dataset:
    """Load the used columns of a headed CSV file with listwise deletion.

    Args:
        path: CSV file with a header row; cells "NA" or empty are missing.
        response_col: Name of the response column.
        predictor_cols: Names of predictor columns, in design order.
        transform_spec: Optional column-name -> tag mapping; tags are
            "log" (replace), "square"/"pow2", or "pow<k>" (add a column).

    Raises:
        MissingColumnError: A named column is absent from the header.
        EmptyAfterDropError: Fewer than k + 2 complete rows remain.
        CsvParseError: A non-missing cell is not a number.
    """
    path = Path(path)
    predictor_cols = list(predictor_cols)
    with path.open(newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvParseError(f"{path}: file is empty, header required") from None
        header = [cell.strip() for cell in header]
        positions = {}
        for name in [response_col, *predictor_cols]:
            if name not in header:
                raise MissingColumnError(
                    f"column {name!r} not found in {path} (header: {header})"
                )
            positions[name] = header.index(name)

        used = [response_col, *predictor_cols]
        raw = {name: [] for name in used}
        row_number = 0
        for record in reader:
            if not record:
                continue
            row_number += 1
            for name in used:
                pos = positions[name]
                if pos >= len(record):
                    raise CsvParseError(
                        f"row {row_number} has {len(record)} cells, "
                        f"column {name!r} is missing",
                        row=row_number,
                        column=name,
                    )
                raw[name].append(_parse_cell(record[pos], row_number, name))

    columns = {name: np.asarray(values, dtype=np.float64)
               for name, values in raw.items()}

    # Assemble the design-order column list, applying transforms.
    spec = dict(transform_spec or {})
    for name in spec:
        if name not in used:
            raise MissingColumnError(
                f"transform names column {name!r} which is not a used column"
            )
    response = columns[response_col]
    if response_col in spec:
        new_name, values, replaces = _apply_transform(
            response_col, spec[response_col], response
        )
        if not replaces:
            raise ValueError(
                "only replacing transforms (log) apply to the response"
            )
        response_name, response = new_name, values
    else:
        response_name = response_col

    predictors: dict[str, np.ndarray] = {}
    for name in predictor_cols:
        values = columns[name]
        if name in spec:
            new_name, new_values, replaces = _apply_transform(
                name, spec[name], values
            )
            if replaces:
                predictors[new_name] = new_values
            else:
                predictors[name] = values
                predictors[new_name] = new_values
        else:
            predictors[name] = values

    keep = np.isfinite(response)
    for values in predictors.values():
        keep &= np.isfinite(values)
    dropped = tuple(int(i) + 1 for i in np.nonzero(~keep)[0])
    row_map = np.nonzero(keep)[0] + 1

    k = 1 + len(predictors)
    if int(keep.sum()) < k + 2:
        raise EmptyAfterDropError(
            f"only {int(keep.sum())} complete rows remain in {path}; "
            f"need at least {k + 2} for {k} design columns"
        )
    return Dataset(
        response=frozen(response[keep]),
        predictors={name: frozen(values[keep])
                    for name, values in predictors.items()},
        response_name=response_name,
        row_map=frozen(row_map.astype(np.int64)),
        dropped_rows=dropped,
        source_path=str(path),
    )


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def report_to_dict(report: DetectionReport) -> dict:
    """JSON-ready view of a report; keys are the serialization contract."""
    rows = report.row_map
    return {
        "p_value": report.p_value,
        "alpha": report.alpha,
        "nsim": report.nsim,
        "seed": report.seed,
        "threshold": report.threshold,
        "t_obs": report.t_obs,
        "residuals": [float(v) for v in report.residuals.values],
        "outliers": [
            {
                "row": int(rows[i]),
                "value": float(report.response[i]),
                "residual": float(report.residuals.values[i]),
            }
            for i in report.outlier_indices
        ],
        "rows": [int(r) for r in rows],
        "dropped_rows": list(report.dropped_rows),
    }


def write_report(report: DetectionReport, format: str, path) -> None:
    """Serialize a report as JSON or as per-observation CSV.

    JSON floats use Python's shortest round-trip representation; the CSV
    variant formats reals with 17 significant digits.  Both round-trip
    losslessly.  Parent directories are created as needed.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if format == "json":
        payload = json.dumps(report_to_dict(report), indent=2, sort_keys=True)
        path.write_text(payload + "\n")
    elif format == "csv":
        flagged = set(int(i) for i in report.outlier_indices)
        with path.open("w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["row", "response", "residual", "outlier"])
            for i, row in enumerate(report.row_map):
                writer.writerow([
                    int(row),
                    _fmt(report.response[i]),
                    _fmt(report.residuals.values[i]),
                    "TRUE" if i in flagged else "FALSE",
                ])
    else:
        raise ValueError(f"unknown report format {format!r}")
