"""Command-line front-end.

Subcommands:
    detect  - run the full detection pipeline on a CSV file
    bench   - sweep sample size or simulation count and fit a growth rate
    synth   - generate synthetic benchmark datasets

Exit codes: 0 success, 2 data errors (files, columns, values),
3 model errors (rank-deficient design, leverage one, zero residual
variance), 1 internal errors.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from .benchmark import run_benchmark
from .dataio import load_csv, write_report
from .datasets import make_dataset, write_columns_csv
from .detection import detect_abnormal_values
from .exceptions import DataError, DevianError, ModelError
from .figures import (
    render_null_histogram,
    render_residual_boxplot,
    render_residual_plot,
    render_runtime_plot,
)

DEFAULT_ALPHA = 0.2
DEFAULT_NSIM = 20000
WORKERS_ENV_VAR = "DEVIAN_WORKERS"


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV_VAR)
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            print(f"warning: ignoring non-integer {WORKERS_ENV_VAR}={raw!r}",
                  file=sys.stderr)
    return 1


def _fresh_seed() -> int:
    import numpy as np

    return int(np.random.SeedSequence().entropy) & (2**64 - 1)


def _parse_transform(spec: str) -> dict[str, str]:
    """Parse "col=tag,col2=tag2" into a column -> tag mapping."""
    mapping = {}
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            raise argparse.ArgumentTypeError(
                f"transform entry {part!r} is not of the form column=tag"
            )
        name, tag = part.split("=", 1)
        mapping[name.strip()] = tag.strip()
    return mapping


def _parse_values(spec: str) -> list[int]:
    try:
        return [int(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"values must be a comma-separated list of integers, got {spec!r}"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="devian",
        description="Detect observations poorly explained by a Gaussian "
                    "linear model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    detect_p = sub.add_parser("detect", help="run detection on a CSV file")
    detect_p.add_argument("--data", required=True, help="input CSV path")
    detect_p.add_argument("--response", required=True,
                          help="response column name")
    detect_p.add_argument("--predictors", default="",
                          help="comma-separated predictor column names "
                               "(empty: intercept-only model)")
    detect_p.add_argument("--alpha", type=float, default=None,
                          help=f"risk level (default {DEFAULT_ALPHA})")
    detect_p.add_argument("--nsim", type=int, default=DEFAULT_NSIM,
                          help="Monte-Carlo simulation count")
    detect_p.add_argument("--workers", type=int, default=None,
                          help=f"simulation processes (default "
                               f"${WORKERS_ENV_VAR} or 1)")
    detect_p.add_argument("--seed", type=int, default=None,
                          help="master seed (default: drawn fresh)")
    detect_p.add_argument("--out", default=None, help="report output path")
    detect_p.add_argument("--format", choices=("json", "csv"), default="json")
    detect_p.add_argument("--plots", default=None,
                          help="directory for SVG figures")
    detect_p.add_argument("--oracle", action="store_true",
                          help="use the literal leave-one-out path "
                               "(slow, verification)")
    detect_p.add_argument("--transform", type=_parse_transform, default={},
                          help='per-column transforms, e.g. "x=square,y=log"')

    bench_p = sub.add_parser("bench", help="runtime scaling benchmark")
    bench_p.add_argument("--sweep", choices=("size", "nsim"), required=True)
    bench_p.add_argument("--values", type=_parse_values, default=None,
                         help="comma-separated sweep values")
    bench_p.add_argument("--repeats", type=int, default=None,
                         help="timed repetitions per point "
                              "(default 200 size / 100 nsim)")
    bench_p.add_argument("--workers", type=int, default=None)
    bench_p.add_argument("--naive", action="store_true",
                         help="benchmark the literal leave-one-out path")
    bench_p.add_argument("--nsim", type=int, default=None,
                         help="simulation count per run of the size sweep "
                              "(default 200)")
    bench_p.add_argument("--out", default=None,
                         help="record output path (.json or .csv); an .svg "
                              "sibling is written next to it")

    synth_p = sub.add_parser("synth", help="generate a synthetic dataset")
    synth_p.add_argument("--n", type=int, default=None,
                         help="row count (default: model-specific)")
    synth_p.add_argument("--model", choices=("linear", "wage-like"),
                         default="linear")
    synth_p.add_argument("--seed", type=int, default=0)
    synth_p.add_argument("--out", required=True, help="output CSV path")
    return parser


def cmd_detect(args) -> int:
    alpha = args.alpha
    if alpha is None:
        alpha = DEFAULT_ALPHA
        print(f"warning: alpha defaulted to {DEFAULT_ALPHA} which is "
              "permissive; pass --alpha to choose a level", file=sys.stderr)
    workers = args.workers if args.workers is not None else _default_workers()
    seed = args.seed if args.seed is not None else _fresh_seed()
    predictor_cols = [c.strip() for c in args.predictors.split(",") if c.strip()]

    dataset = load_csv(args.data, args.response, predictor_cols,
                       transform_spec=args.transform or None)
    if dataset.dropped_rows:
        print(f"note: dropped {len(dataset.dropped_rows)} incomplete row(s): "
              f"{list(dataset.dropped_rows)}", file=sys.stderr)

    result = detect_abnormal_values(
        dataset.response,
        dataset.predictor_matrix(),
        alpha=alpha,
        nsim=args.nsim,
        seed=seed,
        workers=workers,
        method="oracle" if args.oracle else "fast",
        row_map=dataset.row_map,
        dropped_rows=dataset.dropped_rows,
    )
    report = result.report

    print(f"p-value:   {report.p_value:.6g}")
    print(f"threshold: {report.threshold:.6g} (alpha={alpha:g}, "
          f"nsim={args.nsim}, seed={seed})")
    print(f"statistic: {report.t_obs:.6g}")
    if len(report.outlier_indices) == 0:
        print("flagged rows: none")
    else:
        print("flagged rows:")
        for idx in report.outlier_indices:
            row = int(report.row_map[idx])
            print(f"  row {row}: value={report.response[idx]:.6g} "
                  f"residual={report.residuals.values[idx]:.6g}")

    if args.out:
        write_report(report, args.format, args.out)
        print(f"report written to {args.out}")
    if args.plots:
        plots_dir = Path(args.plots)
        plots_dir.mkdir(parents=True, exist_ok=True)
        (plots_dir / "residuals.svg").write_bytes(render_residual_plot(report))
        (plots_dir / "null_histogram.svg").write_bytes(
            render_null_histogram(result.distribution))
        (plots_dir / "residual_boxplot.svg").write_bytes(
            render_residual_boxplot(report))
        print(f"figures written to {plots_dir}")
    return 0


def cmd_bench(args) -> int:
    workers = args.workers if args.workers is not None else _default_workers()
    kwargs = {"workers": workers, "naive": args.naive}
    if args.nsim is not None:
        kwargs["nsim"] = args.nsim
    record = run_benchmark(args.sweep, args.values, args.repeats, **kwargs)

    print(f"sweep: {record.sweep_kind} ({record.method} path, "
          f"repeats={record.repeats})")
    for value, median in zip(record.sweep_values, record.median_runtimes_s):
        print(f"  {value:>8d}  {median:.6f} s")
    print(f"rate r = {record.rate:.6g} s/unit (intercept {record.intercept:.6g}, "
          f"t={record.rate_t_stat:.4g}, p={record.rate_p_value:.4g}, "
          f"RMSE={record.rmse:.4g}, adj R2={record.r2:.4g})")

    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        payload = dataclasses.asdict(record)
        if out.suffix.lower() == ".csv":
            lines = ["sweep_value,median_runtime_s"]
            lines += [f"{v},{format(m, '.17g')}" for v, m in
                      zip(record.sweep_values, record.median_runtimes_s)]
            lines.append(f"# rate={record.rate!r} intercept={record.intercept!r}"
                         f" r2={record.r2!r}")
            out.write_text("\n".join(lines) + "\n")
        else:
            out.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        svg_path = out.with_suffix(".svg")
        svg_path.write_bytes(render_runtime_plot(
            record.sweep_values, record.median_runtimes_s,
            (record.rate, record.intercept), record.sweep_kind,
        ))
        print(f"record written to {out}, figure to {svg_path}")
    return 0


def cmd_synth(args) -> int:
    n = args.n
    if n is None:
        n = 599 if args.model == "wage-like" else 1000
    columns = make_dataset(args.model, n, args.seed)
    write_columns_csv(columns, args.out)
    print(f"wrote {n} rows of {args.model!r} data to {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"detect": cmd_detect, "bench": cmd_bench, "synth": cmd_synth}
    try:
        return handler[args.command](args)
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DevianError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
