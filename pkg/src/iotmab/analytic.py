"""Closed-form success probabilities for non-learning channel policies.

Both formulas give Pr(success | sent) for one dynamic device, conditioning
on everything else being stationary. Powers of (1 - p) are evaluated in the
log domain so that exponents of a few thousand stay exact to ~1e-14.
"""

from __future__ import annotations

import math

from .core import Allocation, NetworkConfig

# Above this exponent a pow() loop would accumulate error; exp(k*log1p(-p))
# is exact enough for optimizer cross-checks at any k.
_LOG_DOMAIN_EXPONENT = 1000


def pow1m(p: float, k: float) -> float:
    """(1 - p)**k, via exp(k*log1p(-p)) once k is large."""
    if k > _LOG_DOMAIN_EXPONENT:
        return math.exp(k * math.log1p(-p))
    return (1.0 - p) ** k


def random_policy_success(cfg: NetworkConfig, static_alloc: Allocation) -> float:
    """Success probability when every dynamic device picks channels uniformly.

    Evaluates (1/N_c) * (1 - p/N_c)**(D-1) * sum_i (1 - p)**S_i.
    Requires at least one dynamic device.
    """
    _check_inputs(cfg, static_alloc)
    p = cfg.tx_prob
    nc = cfg.n_channels
    no_other_dynamic = pow1m(p / nc, cfg.n_dynamic - 1)
    no_static = math.fsum(pow1m(p, s_i) for s_i in static_alloc.counts)
    return (no_other_dynamic / nc) * no_static


def allocation_success(
    cfg: NetworkConfig, static_alloc: Allocation, dyn_alloc: Allocation
) -> float:
    """Success probability under a fixed dynamic allocation (D_i per channel).

    Evaluates sum_i (1 - p)**(D_i - 1) * (1 - p)**S_i * D_i / D. Channels
    with D_i = 0 contribute zero and are skipped, which avoids the spurious
    (1 - p)**(-1) factor a literal evaluation would produce there.
    """
    _check_inputs(cfg, static_alloc)
    if len(dyn_alloc) != cfg.n_channels:
        raise ValueError("dynamic allocation does not match channel count")
    if dyn_alloc.total != cfg.n_dynamic:
        raise ValueError(
            f"dynamic allocation sums to {dyn_alloc.total}, expected {cfg.n_dynamic}"
        )
    p = cfg.tx_prob
    d_total = cfg.n_dynamic
    terms = [
        d_i * pow1m(p, s_i + d_i - 1)
        for s_i, d_i in zip(static_alloc.counts, dyn_alloc.counts)
        if d_i > 0
    ]
    return math.fsum(terms) / d_total


def _check_inputs(cfg: NetworkConfig, static_alloc: Allocation) -> None:
    if cfg.n_dynamic < 1:
        raise ValueError("success probability is conditioned on a dynamic device sending; D >= 1")
    if len(static_alloc) != cfg.n_channels:
        raise ValueError("static allocation does not match channel count")
    if static_alloc.total != cfg.n_static:
        raise ValueError(
            f"static allocation sums to {static_alloc.total}, expected {cfg.n_static}"
        )
