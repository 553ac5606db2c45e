"""Readers for the two iotmab CSV schemas.

The CSV files are the only interface to the simulator; nothing here imports
it or recomputes its statistics.
"""

from __future__ import annotations

from pathlib import Path

TIMESERIES_HEADER = "policy,fraction,seed,slot,cum_rate,win_rate"
SUMMARY_HEADER = "policy,fraction,mean_rate,std_rate,gain_vs_random"


class SchemaError(ValueError):
    """A CSV file is missing, empty, or carries the wrong header."""


def _read_rows(path: str | Path, expected_header: str) -> list[list[str]]:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"{path}: no such file")
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != expected_header:
            raise SchemaError(
                f"{path}: expected header {expected_header!r}, got {header!r}"
            )
        rows = [line.rstrip("\n").split(",") for line in fh if line.strip()]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def read_timeseries(paths: list[str | Path]) -> list[dict]:
    """Rows from one or more timeseries CSVs, concatenated in argument order."""
    out = []
    for path in paths:
        for policy, fraction, seed, slot, cum, win in _read_rows(path, TIMESERIES_HEADER):
            out.append(
                {
                    "policy": policy,
                    "fraction": float(fraction),
                    "seed": int(seed),
                    "slot": int(slot),
                    "cum_rate": float(cum),
                    "win_rate": float(win),
                }
            )
    return out


def read_summary(path: str | Path) -> list[dict]:
    out = []
    for policy, fraction, mean_rate, std_rate, gain in _read_rows(path, SUMMARY_HEADER):
        out.append(
            {
                "policy": policy,
                "fraction": float(fraction),
                "mean_rate": float(mean_rate),
                "std_rate": float(std_rate),
                "gain_vs_random": float(gain),
            }
        )
    return out
