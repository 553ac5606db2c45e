"""Command-line entry points.

    iotmab run <scenario.toml> [--out DIR] [--seeds N] [--threads N]
    iotmab oracle <scenario.toml>
    iotmab gains <summary.csv>

Exit code 0 on success, 1 on any reported error. Set IOTMAB_LOG to debug,
info, warning or error to control verbosity.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import analytic, oracle
from .experiment import load_scenario, run_scenario, summarize_gains


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iotmab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario sweep and write CSV output")
    p_run.add_argument("scenario", help="TOML scenario file")
    p_run.add_argument("--out", help="output directory (default: scenario [output].dir)")
    p_run.add_argument("--seeds", type=int, help="override the scenario's replication count")
    p_run.add_argument("--threads", type=int, default=1,
                       help="worker processes for sweep points (default 1)")

    p_oracle = sub.add_parser("oracle", help="print oracle allocations and analytic rates")
    p_oracle.add_argument("scenario", help="TOML scenario file")

    p_gains = sub.add_parser("gains", help="print relative gains over the random baseline")
    p_gains.add_argument("summary", help="summary.csv produced by `iotmab run`")
    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    ts_path, sum_path = run_scenario(
        scenario, out_dir=args.out, n_seeds=args.seeds, max_workers=args.threads
    )
    print(f"wrote {ts_path}")
    print(f"wrote {sum_path}")
    return 0


def _cmd_oracle(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    for fraction in scenario.smart_fractions:
        cfg = scenario.config_for(fraction)
        static_alloc = cfg.static_allocation()
        real = oracle.optimal_real_allocation(cfg, static_alloc)
        rounded = oracle.round_allocation(real, cfg.n_dynamic)
        greedy = oracle.greedy_allocation(cfg, static_alloc)
        print(f"fraction {fraction:g}: S={cfg.n_static} D={cfg.n_dynamic}")
        print(f"  static counts   {static_alloc.counts}")
        print(f"  optimal (real)  {tuple(round(v, 3) for v in real.values)}  lambda={real.lam:.6g}")
        print(f"  optimal (int)   {rounded.counts}")
        print(f"  greedy          {greedy.counts}")
        print(f"  rate random     {analytic.random_policy_success(cfg, static_alloc):.6f}")
        print(f"  rate optimal    {analytic.allocation_success(cfg, static_alloc, rounded):.6f}")
        print(f"  rate greedy     {analytic.allocation_success(cfg, static_alloc, greedy):.6f}")
    return 0


def _cmd_gains(args: argparse.Namespace) -> int:
    rows = summarize_gains(args.summary)
    print(f"{'policy':<18} {'fraction':>9} {'mean_rate':>10} {'gain_vs_random':>15}")
    for r in rows:
        print(f"{r.policy:<18} {r.fraction:>9.4f} {r.mean_rate:>10.6f} {r.gain_vs_random:>+14.2%}")
    return 0


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("IOTMAB_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s")
    args = _build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "oracle": _cmd_oracle, "gains": _cmd_gains}[args.command]
    try:
        return handler(args)
    except (OSError, ValueError, oracle.ConvergenceError) as exc:
        print(f"iotmab {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
