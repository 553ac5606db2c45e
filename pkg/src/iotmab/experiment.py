"""Experiment runner: scenario files, policy x smart-fraction sweeps, CSV output.

Scenario files are TOML. CSV schemas are fixed byte for byte (6-decimal
floats, LF endings, UTF-8):

    timeseries: policy,fraction,seed,slot,cum_rate,win_rate
    summary:    policy,fraction,mean_rate,std_rate,gain_vs_random

Replication seeds are root_seed + i, recorded in every timeseries row.
"""

from __future__ import annotations

import dataclasses
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .core import NetworkConfig, PolicyKind
from .sim import MetricsSeries, run_simulation

log = logging.getLogger(__name__)

TIMESERIES_HEADER = "policy,fraction,seed,slot,cum_rate,win_rate"
SUMMARY_HEADER = "policy,fraction,mean_rate,std_rate,gain_vs_random"


@dataclass(frozen=True)
class Scenario:
    """A sweep over smart-device fractions and policies.

    base holds the shared network parameters with all devices counted as
    static; each sweep point re-splits base.n_static + base.n_dynamic total
    devices into round(fraction * total) dynamic and the rest static.
    """

    base: NetworkConfig
    smart_fractions: tuple[float, ...]
    policies: tuple[PolicyKind, ...]
    n_seeds: int
    output_path: str

    def __post_init__(self) -> None:
        if not self.smart_fractions:
            raise ValueError("scenario needs at least one smart fraction")
        if not self.policies:
            raise ValueError("scenario needs at least one policy")
        if self.n_seeds < 1:
            raise ValueError(f"n_seeds must be >= 1, got {self.n_seeds}")
        total = self.total_devices
        for f in self.smart_fractions:
            if not 0.0 < f <= 1.0:
                raise ValueError(f"smart fractions must lie in (0, 1], got {f}")
            if _round_half_up(f * total) < 1:
                raise ValueError(f"fraction {f} of {total} devices rounds to no dynamic device")
        labels = [p.label for p in self.policies]
        if len(set(labels)) != len(labels):
            raise ValueError(f"duplicate policies in scenario: {labels}")

    @property
    def total_devices(self) -> int:
        return self.base.n_static + self.base.n_dynamic

    def config_for(self, fraction: float, seed: int | None = None) -> NetworkConfig:
        """The per-run config at one sweep point."""
        n_dynamic = _round_half_up(fraction * self.total_devices)
        return dataclasses.replace(
            self.base,
            n_static=self.total_devices - n_dynamic,
            n_dynamic=n_dynamic,
            seed=self.base.seed if seed is None else seed,
        )


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def load_scenario(path: str | Path) -> Scenario:
    """Parse a TOML scenario file (see scenarios/ for the schema)."""
    path = Path(path)
    with open(path, "rb") as fh:
        raw = tomllib.load(fh)
    try:
        net = raw["network"]
        sweep = raw["sweep"]
        base = NetworkConfig(
            n_channels=int(net["n_channels"]),
            n_static=int(net["total_devices"]),
            n_dynamic=0,
            tx_prob=float(net["tx_prob"]),
            static_split=tuple(float(f) for f in net["static_split"]),
            horizon=int(net["horizon"]),
            seed=int(net["seed"]),
        )
        scenario = Scenario(
            base=base,
            smart_fractions=tuple(float(f) for f in sweep["smart_fractions"]),
            policies=tuple(PolicyKind.parse(p) for p in sweep["policies"]),
            n_seeds=int(sweep["n_seeds"]),
            output_path=str(raw.get("output", {}).get("dir", "results")),
        )
    except KeyError as exc:
        raise ValueError(f"{path}: missing scenario key {exc}") from None
    return scenario


def _run_point(args: tuple[Scenario, PolicyKind, float, int]) -> tuple[str, float, int, MetricsSeries]:
    scenario, policy, fraction, seed = args
    cfg = scenario.config_for(fraction, seed=seed)
    static_alloc = cfg.static_allocation()
    series = run_simulation(cfg, static_alloc, policy)
    log.info("ran %s fraction=%g seed=%d end_rate=%.4f",
             policy.label, fraction, seed, series.end_rate)
    return policy.label, fraction, seed, series


RunResult = tuple[str, float, int, MetricsSeries]


def write_timeseries(results: list[RunResult], path: str | Path) -> Path:
    """Write one timeseries row per (policy, fraction, seed, window boundary)."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(TIMESERIES_HEADER + "\n")
        for label, fraction, seed, series in results:
            prefix = f"{label},{fraction:.6f},{seed}"
            for slot, cum, win in series.points:
                fh.write(f"{prefix},{slot},{cum:.6f},{win:.6f}\n")
    return path


def write_summary(results: list[RunResult], path: str | Path) -> Path:
    """Write one summary row per (policy, fraction): end-rate mean, sample
    stddev across seeds, and relative gain over the random baseline at the
    same fraction (nan when no baseline was run)."""
    path = Path(path)
    end_rates: dict[tuple[str, float], list[float]] = {}
    for label, fraction, seed, series in results:
        end_rates.setdefault((label, fraction), []).append(series.end_rate)
    means = {key: float(np.mean(rates)) for key, rates in end_rates.items()}
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(SUMMARY_HEADER + "\n")
        for (label, fraction), rates in end_rates.items():
            std = float(np.std(rates, ddof=1)) if len(rates) > 1 else 0.0
            base = means.get(("random", fraction))
            gain = (means[(label, fraction)] - base) / base if base is not None else float("nan")
            fh.write(f"{label},{fraction:.6f},{means[(label, fraction)]:.6f},{std:.6f},{gain:.6f}\n")
    return path


def run_scenario(
    scenario: Scenario,
    out_dir: str | Path | None = None,
    n_seeds: int | None = None,
    max_workers: int = 1,
) -> tuple[Path, Path]:
    """Run the full sweep and write timeseries.csv and summary.csv.

    Sweep points are independent; max_workers > 1 distributes them over
    processes. Output is written in deterministic sweep order regardless of
    completion order, so identical scenarios reproduce identical bytes.
    """
    out = Path(out_dir if out_dir is not None else scenario.output_path)
    seeds = n_seeds if n_seeds is not None else scenario.n_seeds
    if seeds < 1:
        raise ValueError(f"need at least one seed, got {seeds}")
    points = [
        (scenario, policy, fraction, scenario.base.seed + i)
        for policy in scenario.policies
        for fraction in scenario.smart_fractions
        for i in range(seeds)
    ]
    if max_workers > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(_run_point, points))
    else:
        results = [_run_point(pt) for pt in points]

    out.mkdir(parents=True, exist_ok=True)
    ts_path = write_timeseries(results, out / "timeseries.csv")
    sum_path = write_summary(results, out / "summary.csv")
    log.info("wrote %s and %s", ts_path, sum_path)
    return ts_path, sum_path


@dataclass(frozen=True)
class GainRow:
    policy: str
    fraction: float
    mean_rate: float
    gain_vs_random: float


def summarize_gains(summary_path: str | Path) -> list[GainRow]:
    """Relative end-rate gain over the random baseline, per (policy, fraction).

    Recomputed from the mean_rate column; raises ValueError if any fraction
    lacks a random row.
    """
    rows = _read_summary(summary_path)
    baseline = {r["fraction"]: r["mean_rate"] for r in rows if r["policy"] == "random"}
    out = []
    for r in rows:
        base = baseline.get(r["fraction"])
        if base is None:
            raise ValueError(
                f"no random baseline for fraction {r['fraction']:g} in {summary_path}"
            )
        out.append(
            GainRow(r["policy"], r["fraction"], r["mean_rate"], (r["mean_rate"] - base) / base)
        )
    return out


def _read_summary(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != SUMMARY_HEADER:
            raise ValueError(f"{path}: expected header {SUMMARY_HEADER!r}, got {header!r}")
        rows = []
        for line in fh:
            policy, fraction, mean_rate, std_rate, gain = line.strip().split(",")
            rows.append(
                {
                    "policy": policy,
                    "fraction": float(fraction),
                    "mean_rate": float(mean_rate),
                    "std_rate": float(std_rate),
                    "gain_vs_random": float(gain),
                }
            )
    if not rows:
        raise ValueError(f"{path}: summary has no data rows")
    return rows
