"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The benchmark-scale runs (2000 devices, 1e6 slots) are shared through a
module-scoped fixture and take a few minutes in total; their CSV output is
left in results/acceptance/ for the plotting package.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from iotmab import (
    Allocation,
    NetworkConfig,
    PolicyKind,
    Scenario,
    TsState,
    Ucb1State,
    allocation_success,
    brute_force_allocation,
    entity_stream,
    greedy_allocation,
    lambert_w0,
    optimal_real_allocation,
    random_policy_success,
    round_allocation,
    run_scenario,
    run_simulation,
)
from iotmab.oracle import allocation_objective, capacity_limit
from iotmab.experiment import write_summary, write_timeseries
from conftest import BENCH_SPLIT
from refimpl import grid_search_real_optimum

ACCEPTANCE_OUT = Path(__file__).resolve().parents[1] / "results" / "acceptance"

TOTAL_DEVICES = 2000
TX_PROB = 1e-3
HORIZON = 10**6
ROOT_SEED = 1

# fraction -> (policies, number of seeds); 6 seeds at 1% because each run
# carries only ~2e4 attempts there.
RUN_MATRIX = (
    (0.01, ("random", "oracle_optimal", "ucb1", "thompson"), 6),
    (0.1, ("random", "oracle_optimal", "ucb1", "thompson"), 3),
    (0.3, ("random", "oracle_optimal", "ucb1", "thompson"), 3),
    (0.5, ("random", "oracle_optimal", "ucb1", "thompson"), 3),
    (1.0, ("random", "oracle_optimal"), 3),
)


def check(name: str, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"


def bench_config(fraction: float, seed: int) -> NetworkConfig:
    n_dynamic = round(fraction * TOTAL_DEVICES)
    return NetworkConfig(
        n_channels=10,
        n_static=TOTAL_DEVICES - n_dynamic,
        n_dynamic=n_dynamic,
        tx_prob=TX_PROB,
        static_split=BENCH_SPLIT,
        horizon=HORIZON,
        seed=seed,
    )


@pytest.fixture(scope="module")
def bench_runs():
    results = []
    rates: dict[tuple[float, str], list[float]] = {}
    max_seconds = 0.0
    for fraction, kinds, n_seeds in RUN_MATRIX:
        for kind in kinds:
            for i in range(n_seeds):
                cfg = bench_config(fraction, ROOT_SEED + i)
                t0 = time.perf_counter()
                series = run_simulation(cfg, cfg.static_allocation(), PolicyKind(kind))
                max_seconds = max(max_seconds, time.perf_counter() - t0)
                results.append((kind, fraction, ROOT_SEED + i, series))
                rates.setdefault((fraction, kind), []).append(series.end_rate)
    ACCEPTANCE_OUT.mkdir(parents=True, exist_ok=True)
    write_timeseries(results, ACCEPTANCE_OUT / "timeseries.csv")
    write_summary(results, ACCEPTANCE_OUT / "summary.csv")
    means = {key: float(np.mean(v)) for key, v in rates.items()}
    return {"means": means, "max_seconds": max_seconds}


def test_lambert_w_correctness():
    t0 = time.perf_counter()
    worst = 0.0
    for x in np.logspace(-6.0, 3.0, 10_000):
        w = lambert_w0(float(x))
        worst = max(worst, abs(w * math.exp(w) - x) / max(1.0, x))
    fixed_ok = lambert_w0(0.0) == 0.0 and abs(lambert_w0(math.e) - 1.0) <= 1e-12
    elapsed = time.perf_counter() - t0
    check(
        "lambert-w inverse identity",
        worst <= 1e-12 and fixed_ok and elapsed < 1.0,
        f"worst residual {worst:.2e} (tol 1e-12), W(0)=0 and W(e)=1 ok={fixed_ok}, "
        f"{elapsed:.2f}s (limit 1s)",
    )


@pytest.fixture(scope="module")
def small_instances():
    rng = np.random.default_rng(2024)
    instances = []
    while len(instances) < 200:
        nc = int(rng.integers(2, 5))
        d = int(rng.integers(1, 13))
        p = float(rng.uniform(0.01, 0.3))
        statics = tuple(int(rng.integers(0, 21)) for _ in range(nc))
        split = (1.0,) + (0.0,) * (nc - 1)
        cfg = NetworkConfig(nc, sum(statics), d, p, split, horizon=10, seed=0)
        if d >= capacity_limit(cfg):
            continue
        instances.append((cfg, Allocation(statics)))
    return instances


def test_oracle_matches_grid_search(small_instances):
    t0 = time.perf_counter()
    worst = 0.0
    for cfg, static_alloc in small_instances:
        real = optimal_real_allocation(cfg, static_alloc)
        lagrange_obj = allocation_objective(cfg, static_alloc, real.values)
        grid_obj, _ = grid_search_real_optimum(static_alloc.counts, cfg.n_dynamic, cfg.tx_prob)
        worst = max(worst, abs(lagrange_obj - grid_obj))
    elapsed = time.perf_counter() - t0
    check(
        "oracle vs 1e-3 grid search (200 instances)",
        worst <= 1e-3 and elapsed < 30.0,
        f"worst |objective gap| {worst:.2e} (tol 1e-3), {elapsed:.1f}s (limit 30s)",
    )


def test_rounded_oracle_near_integer_optimum(small_instances):
    t0 = time.perf_counter()
    gaps = []
    for cfg, static_alloc in small_instances:
        real = optimal_real_allocation(cfg, static_alloc)
        rounded = round_allocation(real, cfg.n_dynamic)
        brute = brute_force_allocation(cfg, static_alloc)
        ob_round = allocation_objective(cfg, static_alloc, rounded.counts)
        ob_brute = allocation_objective(cfg, static_alloc, brute.counts)
        gaps.append((ob_brute - ob_round) / ob_brute)
    gaps = np.array(gaps)
    elapsed = time.perf_counter() - t0
    violations = int((gaps > 0.02).sum())
    check(
        "floor-then-remainder rounding within 2% of integer optimum",
        violations == 0 and elapsed < 30.0,
        f"{violations}/200 instances above 2% (median gap {np.median(gaps)*100:.2f}%, "
        f"mean {gaps.mean()*100:.2f}%, max {gaps.max()*100:.1f}%), {elapsed:.1f}s (limit 30s)",
    )


def test_analytic_matches_monte_carlo():
    t0 = time.perf_counter()
    cfg0 = NetworkConfig(10, 180, 20, 1e-2, BENCH_SPLIT, horizon=10**5, seed=0)
    static_alloc = cfg0.static_allocation()
    real = optimal_real_allocation(cfg0, static_alloc)
    targets = {
        "random": random_policy_success(cfg0, static_alloc),
        "oracle_optimal": allocation_success(cfg0, static_alloc, round_allocation(real, 20)),
        "oracle_greedy": allocation_success(
            cfg0, static_alloc, greedy_allocation(cfg0, static_alloc)
        ),
    }
    details = []
    ok = True
    import dataclasses

    for kind, expected in targets.items():
        attempts = 0
        successes = 0
        for seed in range(10):
            cfg = dataclasses.replace(cfg0, seed=seed)
            series = run_simulation(cfg, static_alloc, PolicyKind(kind))
            attempts += series.dynamic_attempts
            successes += series.dynamic_successes
        rate = successes / attempts
        se = math.sqrt(expected * (1.0 - expected) / attempts)
        dev = abs(rate - expected) / se
        ok = ok and dev <= 3.0
        details.append(f"{kind} {rate:.4f} vs {expected:.4f} ({dev:.2f} se)")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 60.0
    check(
        "analytic vs monte-carlo (scaled, 10 seeds)",
        ok,
        "; ".join(details) + f", {elapsed:.0f}s (limit 60s)",
    )


def test_benchmark_scale_success_rates(bench_runs):
    means = bench_runs["means"]
    random_rate = means[(0.1, "random")]
    ucb1_rate = means[(0.1, "ucb1")]
    ts_rate = means[(0.1, "thompson")]
    oo_rate = means[(0.1, "oracle_optimal")]
    ok = (
        abs(random_rate - 0.83) <= 0.02
        and abs(ucb1_rate - 0.88) <= 0.02
        and abs(ts_rate - 0.89) <= 0.02
        and random_rate < ucb1_rate < oo_rate
        and random_rate < ts_rate < oo_rate
        and bench_runs["max_seconds"] < 300.0
    )
    check(
        "benchmark-scale success rates (10% smart, 3 seeds)",
        ok,
        f"random {random_rate:.4f} (0.83+-0.02), ucb1 {ucb1_rate:.4f} (0.88+-0.02), "
        f"thompson {ts_rate:.4f} (0.89+-0.02), oracle {oo_rate:.4f}, "
        f"slowest run {bench_runs['max_seconds']:.0f}s (limit 300s)",
    )


def test_gains_at_low_and_full_smart_fractions(bench_runs):
    means = bench_runs["means"]
    base_low = means[(0.01, "random")]
    gain = {
        kind: (means[(0.01, kind)] - base_low) / base_low
        for kind in ("oracle_optimal", "ucb1", "thompson")
    }
    base_full = means[(1.0, "random")]
    gain_full = (means[(1.0, "oracle_optimal")] - base_full) / base_full
    ok = (
        abs(gain["oracle_optimal"] - 0.16) <= 0.03
        and abs(gain["ucb1"] - 0.12) <= 0.03
        and gain["ucb1"] <= gain["thompson"] <= gain["oracle_optimal"]
        and gain_full <= 0.02
    )
    check(
        "relative gains vs random (1% and 100% smart)",
        ok,
        f"at 1%: oracle {gain['oracle_optimal']:+.1%} (16%+-3), ucb1 {gain['ucb1']:+.1%} "
        f"(12%+-3), thompson {gain['thompson']:+.1%} (between); "
        f"at 100%: oracle {gain_full:+.1%} (<= 2 points)",
    )


def test_policy_ordering_across_fractions(bench_runs):
    means = bench_runs["means"]
    ok = True
    details = []
    for fraction in (0.1, 0.3, 0.5):
        rnd = means[(fraction, "random")]
        oo = means[(fraction, "oracle_optimal")]
        ucb = means[(fraction, "ucb1")]
        ts = means[(fraction, "thompson")]
        ok = ok and (oo >= ts >= rnd) and (oo >= ucb >= rnd)
        details.append(f"{fraction:g}: rnd {rnd:.4f} <= ucb {ucb:.4f},ts {ts:.4f} <= oo {oo:.4f}")
    check("policy ordering at 10/30/50% smart", ok, "; ".join(details))


def test_scenario_reruns_are_byte_identical(tmp_path):
    base = NetworkConfig(5, 36, 4, 0.02, (0.4, 0.3, 0.2, 0.1, 0.0), horizon=5000, seed=17)
    scenario = Scenario(
        base=base,
        smart_fractions=(0.1, 0.5),
        policies=tuple(
            PolicyKind(k) for k in ("random", "oracle_greedy", "oracle_optimal", "ucb1", "thompson")
        ),
        n_seeds=2,
        output_path=str(tmp_path / "a"),
    )
    a_ts, a_sum = run_scenario(scenario)
    b_ts, b_sum = run_scenario(scenario, out_dir=tmp_path / "b")
    ok = a_ts.read_bytes() == b_ts.read_bytes() and a_sum.read_bytes() == b_sum.read_bytes()
    check(
        "deterministic CSV output",
        ok,
        f"timeseries {a_ts.stat().st_size} bytes and summary {a_sum.stat().st_size} bytes "
        "identical across reruns",
    )


def test_single_agent_bandit_sanity():
    steps = 10_000
    seeds = 20
    fractions = {}
    for kind in ("ucb1", "thompson"):
        best = 0
        for seed in range(seeds):
            env = entity_stream(seed, 900)
            policy_rng = entity_stream(seed, 901)
            state = Ucb1State(2, alpha=0.5) if kind == "ucb1" else TsState(2)
            for _ in range(steps):
                arm = state.choose(policy_rng)
                reward = int(env.random() < (0.9 if arm == 0 else 0.1))
                state.update(arm, reward)
                best += arm == 0
        fractions[kind] = best / (steps * seeds)
    ok = all(v >= 0.85 for v in fractions.values())
    check(
        "single-agent sanity (2-arm 0.9/0.1)",
        ok,
        f"best-arm fraction ucb1 {fractions['ucb1']:.3f}, thompson {fractions['thompson']:.3f} "
        "(threshold 0.85)",
    )
