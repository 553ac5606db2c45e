"""Console entry points: plot-timeseries and plot-gains."""

from __future__ import annotations

import argparse
import sys

from .csvio import SchemaError
from .figures import PlotSpec, plot_gains, plot_timeseries


def main_timeseries(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-timeseries",
        description="Render per-fraction success-rate panels from timeseries CSVs.",
    )
    parser.add_argument("csvs", nargs="+", help="timeseries CSV files")
    parser.add_argument("--out", default="fig_timeseries.png", help="output PNG path")
    parser.add_argument(
        "--fractions",
        help="comma-separated smart fractions to panel (default: all in the CSV)",
    )
    parser.add_argument(
        "--tx-prob",
        type=float,
        default=1e-3,
        help="per-slot transmit probability used to annotate mean transmissions "
        "per device on a top axis; pass 0 to drop the annotation (default 1e-3)",
    )
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    fractions = None
    if args.fractions:
        fractions = tuple(float(f) for f in args.fractions.split(","))
    spec = PlotSpec(
        csv_paths=tuple(args.csvs),
        out_path=args.out,
        fractions=fractions,
        tx_prob=args.tx_prob or None,
        dpi=args.dpi,
    )
    try:
        out = plot_timeseries(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"plot-timeseries: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


def main_gains(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot-gains",
        description="Render gain-vs-smart-fraction curves from a summary CSV.",
    )
    parser.add_argument("summary", help="summary CSV file")
    parser.add_argument("--out", default="fig_gains.png", help="output PNG path")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    try:
        out = plot_gains(args.summary, args.out, dpi=args.dpi)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"plot-gains: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0
