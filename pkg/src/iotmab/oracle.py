"""Centralized allocations of dynamic devices over channels.

The optimal stationary allocation maximizes

    f(D_1..D_Nc) = sum_i D_i * (1 - p)**(S_i + D_i - 1)

subject to sum_i D_i = D and D_i >= 0. The stationarity conditions have a
closed form per channel in terms of the principal Lambert W function and a
Lagrange multiplier, which is then pinned down by bisection on the monotone
map multiplier -> total allocated. A greedy insertion baseline and a
brute-force enumerator (test oracle) complete the module.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .analytic import pow1m
from .core import Allocation, NetworkConfig

W_RESIDUAL_TOL = 1e-14
W_MAX_ITER = 50
SUM_REL_TOL = 1e-9
BISECT_MAX_ITER = 200
BRUTE_FORCE_MAX_D = 15
BRUTE_FORCE_MAX_CHANNELS = 5


class OverCapacityError(ValueError):
    """Total dynamic load exceeds what the stationarity conditions can place."""


class ConvergenceError(RuntimeError):
    """Root finding did not reach its tolerance within the iteration cap."""


def lambert_w0(x: float) -> float:
    """Principal Lambert W on x >= 0: the w >= 0 with w * exp(w) = x.

    Halley iteration from a regime-dependent initial guess (series for small
    x, log1p(x) otherwise), iterated to a residual of W_RESIDUAL_TOL relative
    to max(1, x).
    """
    if x < 0.0:
        raise ValueError(f"lambert_w0 requires x >= 0, got {x}")
    if x == 0.0:
        return 0.0
    # Series W(x) ~ x(1 - x) only helps very close to 0; beyond that the
    # log1p guess keeps Halley away from the w = -1 pole.
    w = x * (1.0 - x) if x < 0.5 else math.log1p(x)
    tol = W_RESIDUAL_TOL * max(1.0, x)
    for _ in range(W_MAX_ITER):
        ew = math.exp(w)
        residual = w * ew - x
        if abs(residual) <= tol:
            return w
        wp1 = w + 1.0
        w -= residual / (ew * wp1 - (w + 2.0) * residual / (2.0 * wp1))
    raise ConvergenceError(f"lambert_w0({x}) did not converge in {W_MAX_ITER} iterations")


@dataclass(frozen=True)
class RealAllocation:
    """Real-valued optimal allocation and its Lagrange multiplier."""

    values: tuple[float, ...]
    lam: float

    @property
    def total(self) -> float:
        return math.fsum(self.values)


def capacity_limit(cfg: NetworkConfig) -> float:
    """Largest dynamic load the stationarity conditions can absorb, N_c / -ln(1-p)."""
    return cfg.n_channels * (-1.0 / math.log1p(-cfg.tx_prob))


def real_allocation_at(lam: float, static_counts: tuple[int, ...], tx_prob: float) -> list[float]:
    """Per-channel optimizer D_i*(lam), clipped at zero.

    D_i*(lam) = max(0, [W(lam * e / (1-p)**(S_i - 1)) - 1] / ln(1-p)); the
    map is continuous and non-increasing in lam on lam > 0.
    """
    log_q = math.log1p(-tx_prob)
    values = []
    for s_i in static_counts:
        arg = lam * math.e / pow1m(tx_prob, s_i - 1)
        v = (lambert_w0(arg) - 1.0) / log_q
        values.append(v if v > 0.0 else 0.0)
    return values


def optimal_real_allocation(cfg: NetworkConfig, static_alloc: Allocation) -> RealAllocation:
    """Solve the real-valued allocation problem by bisection on the multiplier.

    The bracket starts at lam_hi = max_i (1-p)**(S_i - 1), where every channel
    receives zero, and lam_lo is halved until the total allocation reaches D.
    Raises OverCapacityError if D is at or beyond capacity_limit(cfg) and
    ConvergenceError if the bracket fails to tighten within the iteration cap.
    """
    _check_oracle_inputs(cfg, static_alloc)
    d_total = cfg.n_dynamic
    if d_total >= capacity_limit(cfg):
        raise OverCapacityError(
            f"D={d_total} exceeds the {capacity_limit(cfg):.3f} device capacity of "
            f"{cfg.n_channels} channels at p={cfg.tx_prob}"
        )
    counts = static_alloc.counts
    p = cfg.tx_prob

    def total_at(lam: float) -> float:
        return math.fsum(real_allocation_at(lam, counts, p))

    lam_hi = max(pow1m(p, s_i - 1) for s_i in counts)
    lam_lo = lam_hi
    while total_at(lam_lo) < d_total:
        lam_lo *= 0.5
        if lam_lo == 0.0:
            raise ConvergenceError("multiplier bracket underflowed before covering D")

    lam = lam_lo
    for _ in range(BISECT_MAX_ITER):
        lam = 0.5 * (lam_lo + lam_hi)
        total = total_at(lam)
        if abs(total - d_total) <= SUM_REL_TOL * d_total:
            break
        if total > d_total:
            lam_lo = lam
        else:
            lam_hi = lam
    else:
        raise ConvergenceError(
            f"multiplier bisection missed |sum - D| <= {SUM_REL_TOL * d_total:g} "
            f"after {BISECT_MAX_ITER} iterations"
        )
    return RealAllocation(tuple(real_allocation_at(lam, counts, p)), lam)


def round_allocation(real_alloc: RealAllocation, n_dynamic: int) -> Allocation:
    """Integer allocation: floor all channels but the last, remainder to the last.

    This is deliberately the floor-then-remainder rule, not a best-rounding
    scheme; the brute-force enumerator quantifies what it loses.
    """
    floors = [math.floor(v) for v in real_alloc.values[:-1]]
    last = n_dynamic - sum(floors)
    assert last >= 0, "remainder channel went negative; real allocation was invalid"
    return Allocation(tuple(floors) + (last,))


def greedy_allocation(cfg: NetworkConfig, static_alloc: Allocation) -> Allocation:
    """Insert devices one at a time into the currently least-loaded channel.

    Load of channel i is S_i plus the dynamic devices inserted so far; ties
    go to the lowest channel index.
    """
    _check_oracle_inputs(cfg, static_alloc, allow_zero_dynamic=True)
    loads = list(static_alloc.counts)
    counts = [0] * cfg.n_channels
    for _ in range(cfg.n_dynamic):
        i = loads.index(min(loads))
        loads[i] += 1
        counts[i] += 1
    return Allocation(tuple(counts))


def allocation_objective(
    cfg: NetworkConfig, static_alloc: Allocation, values: tuple[float, ...] | list[float]
) -> float:
    """Objective f = sum_i D_i (1-p)**(S_i + D_i - 1) for a (possibly real) allocation."""
    p = cfg.tx_prob
    return math.fsum(
        d_i * pow1m(p, s_i + d_i - 1)
        for s_i, d_i in zip(static_alloc.counts, values)
        if d_i > 0
    )


def brute_force_allocation(cfg: NetworkConfig, static_alloc: Allocation) -> Allocation:
    """Exhaustively maximize the objective over integer compositions of D.

    Only for test-scale instances (D <= 15, N_c <= 5). Ties resolve to the
    lexicographically smallest allocation.
    """
    _check_oracle_inputs(cfg, static_alloc, allow_zero_dynamic=True)
    d_total = cfg.n_dynamic
    nc = cfg.n_channels
    if d_total > BRUTE_FORCE_MAX_D or nc > BRUTE_FORCE_MAX_CHANNELS:
        raise ValueError(
            f"instance too large to enumerate: D={d_total} (max {BRUTE_FORCE_MAX_D}), "
            f"N_c={nc} (max {BRUTE_FORCE_MAX_CHANNELS})"
        )
    best = None
    best_obj = -math.inf
    for cuts in itertools.combinations(range(d_total + nc - 1), nc - 1):
        alloc = _composition_from_cuts(cuts, d_total, nc)
        obj = allocation_objective(cfg, static_alloc, alloc)
        if obj > best_obj:
            best_obj = obj
            best = alloc
    return Allocation(tuple(best))


def _composition_from_cuts(cuts: tuple[int, ...], total: int, parts: int) -> list[int]:
    # Stars-and-bars; iterating cut tuples in lexicographic order enumerates
    # compositions in lexicographic order, so "first strict improvement wins"
    # picks the lexicographically smallest maximizer.
    bounds = (-1,) + cuts + (total + parts - 1,)
    return [bounds[j + 1] - bounds[j] - 1 for j in range(parts)]


def _check_oracle_inputs(
    cfg: NetworkConfig, static_alloc: Allocation, allow_zero_dynamic: bool = False
) -> None:
    if len(static_alloc) != cfg.n_channels:
        raise ValueError("static allocation does not match channel count")
    if static_alloc.total != cfg.n_static:
        raise ValueError(
            f"static allocation sums to {static_alloc.total}, expected {cfg.n_static}"
        )
    if cfg.n_dynamic < 1 and not allow_zero_dynamic:
        raise ValueError("allocation requires at least one dynamic device")
