"""Slotted-ALOHA engine: traffic generation, collision resolution, metrics.

The run is event-driven. Dynamic transmissions are sparse (each device sends
with probability p per slot, p around 1e-3 at benchmark scale), so per-device
transmission slots are pre-drawn as geometric gaps and only slots with at
least one dynamic sender are resolved. Static devices are interchangeable,
so their per-channel sender counts come from binomial draws instead of
per-device Bernoulli trials; slots without dynamic senders never affect the
dynamic success metrics and are skipped entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oracle
from .bandit import TsState, Ucb1State
from .core import (
    STREAM_DEVICE_CLOCK,
    STREAM_DEVICE_POLICY,
    STREAM_STATIC_TRAFFIC,
    Allocation,
    NetworkConfig,
    PolicyKind,
    entity_stream,
    validate_config,
)

DEFAULT_WINDOW_COUNT = 200


@dataclass(frozen=True)
class SlotOutcome:
    """Result of one resolved slot.

    A channel succeeds iff it carried exactly one sender (static or dynamic);
    dynamic_acks aligns with the dynamic_channels passed to resolve_slot.
    """

    attempts_per_channel: tuple[int, ...]
    successes: int
    dynamic_attempts: int
    dynamic_successes: int
    dynamic_acks: tuple[bool, ...]


def resolve_slot(static_counts, dynamic_channels) -> SlotOutcome:
    """Resolve one slot from per-channel static sender counts plus the
    channel picked by each transmitting dynamic device."""
    attempts = [int(c) for c in static_counts]
    for ch in dynamic_channels:
        attempts[ch] += 1
    successes = sum(1 for a in attempts if a == 1)
    acks = tuple(attempts[ch] == 1 for ch in dynamic_channels)
    dynamic_successes = sum(acks)
    assert successes <= len(attempts)
    assert dynamic_successes <= len(dynamic_channels)
    return SlotOutcome(tuple(attempts), successes, len(dynamic_channels), dynamic_successes, acks)


def fast_static_traffic(
    static_alloc: Allocation,
    tx_prob: float,
    rng: np.random.Generator,
    n_slots: int | None = None,
):
    """Per-channel static sender counts, Binomial(S_i, p) per channel.

    Distributionally identical to S_i independent Bernoulli senders because
    static devices are interchangeable: only their per-channel count affects
    collision outcomes. Returns one row (n_slots=None) or an (n_slots, N_c)
    matrix drawn in a single batch.
    """
    counts = np.asarray(static_alloc.counts, dtype=np.int64)
    if n_slots is None:
        return rng.binomial(counts, tx_prob)
    return rng.binomial(counts[None, :], tx_prob, size=(n_slots, len(counts)))


@dataclass(frozen=True, eq=False)
class MetricsSeries:
    """Dynamic-device success rates sampled at window boundaries.

    slots[k] is the number of elapsed slots at the k-th boundary (the last
    boundary is the horizon); cum_rates[k] is total dynamic successes over
    total dynamic attempts up to that boundary, and win_rates[k] the same
    ratio within the window ending there. Empty windows repeat the cumulative
    rate, and rates are 0.0 until the first attempt.
    """

    window_size: int
    slots: np.ndarray
    cum_rates: np.ndarray
    win_rates: np.ndarray
    dynamic_attempts: int
    dynamic_successes: int

    @property
    def points(self) -> list[tuple[int, float, float]]:
        return list(zip(self.slots.tolist(), self.cum_rates.tolist(), self.win_rates.tolist()))

    @property
    def end_rate(self) -> float:
        return float(self.cum_rates[-1])


def transmission_slots(rng: np.random.Generator, horizon: int, tx_prob: float) -> np.ndarray:
    """Sorted 0-based slot indices of one device's Bernoulli(p) transmissions."""
    est = int(horizon * tx_prob + 6.0 * math.sqrt(horizon * tx_prob) + 16.0)
    times = np.cumsum(rng.geometric(tx_prob, size=est)) - 1
    while times[-1] < horizon:
        times = np.concatenate([times, times[-1] + np.cumsum(rng.geometric(tx_prob, size=est))])
    return times[times < horizon]


class _RandomDriver:
    """Uniform channel choice per transmission, pre-drawn per device."""

    def __init__(self, cfg: NetworkConfig, n_tx: np.ndarray):
        self._choices = [
            entity_stream(cfg.seed, STREAM_DEVICE_POLICY, d).integers(
                cfg.n_channels, size=int(n_tx[d])
            )
            for d in range(cfg.n_dynamic)
        ]
        self._cursor = np.zeros(cfg.n_dynamic, dtype=np.int64)

    def choose(self, dev: int) -> int:
        i = self._cursor[dev]
        self._cursor[dev] = i + 1
        return int(self._choices[dev][i])

    def update(self, dev: int, channel: int, reward: int) -> None:
        pass


class _FixedDriver:
    """Stationary assignment: device dev always sends on channel_of[dev]."""

    def __init__(self, dyn_alloc: Allocation):
        self.channel_of = np.repeat(np.arange(len(dyn_alloc)), dyn_alloc.counts)

    def choose(self, dev: int) -> int:
        return int(self.channel_of[dev])

    def update(self, dev: int, channel: int, reward: int) -> None:
        pass


class _BanditDriver:
    """One learner state and one private stream per device."""

    def __init__(self, cfg: NetworkConfig, policy: PolicyKind):
        if policy.kind == "ucb1":
            self.states = [Ucb1State(cfg.n_channels, policy.alpha) for _ in range(cfg.n_dynamic)]
        else:
            self.states = [TsState(cfg.n_channels) for _ in range(cfg.n_dynamic)]
        self.rngs = [
            entity_stream(cfg.seed, STREAM_DEVICE_POLICY, d) for d in range(cfg.n_dynamic)
        ]

    def choose(self, dev: int) -> int:
        return self.states[dev].choose(self.rngs[dev])

    def update(self, dev: int, channel: int, reward: int) -> None:
        self.states[dev].update(channel, reward)


def dynamic_allocation_for(
    cfg: NetworkConfig, static_alloc: Allocation, policy: PolicyKind
) -> Allocation | None:
    """The fixed dynamic allocation an oracle policy uses, None for the others."""
    if policy.kind == "oracle_optimal":
        real = oracle.optimal_real_allocation(cfg, static_alloc)
        return oracle.round_allocation(real, cfg.n_dynamic)
    if policy.kind == "oracle_greedy":
        return oracle.greedy_allocation(cfg, static_alloc)
    return None


def run_simulation(
    cfg: NetworkConfig,
    static_alloc: Allocation,
    policy: PolicyKind,
    window_size: int | None = None,
) -> MetricsSeries:
    """Simulate cfg.horizon slots and return the dynamic success-rate series.

    Per slot: every device transmits with probability p (static devices on
    their fixed channel, dynamic devices on the channel their policy picks
    from its own state); a channel delivers iff it carried exactly one
    sender; transmitting learners receive the Ack outcome as reward before
    their next transmission. Identical (cfg, static_alloc, policy) inputs
    reproduce the series bit for bit.
    """
    validate_config(cfg)
    if cfg.n_dynamic < 1:
        raise ValueError("simulation metrics need at least one dynamic device")
    if len(static_alloc) != cfg.n_channels or static_alloc.total != cfg.n_static:
        raise ValueError("static allocation does not match the configuration")
    window = window_size if window_size is not None else max(1, cfg.horizon // DEFAULT_WINDOW_COUNT)
    if window < 1:
        raise ValueError(f"window_size must be positive, got {window}")

    d_total = cfg.n_dynamic
    per_device = [
        transmission_slots(entity_stream(cfg.seed, STREAM_DEVICE_CLOCK, d), cfg.horizon, cfg.tx_prob)
        for d in range(d_total)
    ]
    n_tx = np.array([t.size for t in per_device], dtype=np.int64)
    slots = np.concatenate(per_device)
    devs = np.repeat(np.arange(d_total, dtype=np.int64), n_tx)
    order = np.lexsort((devs, slots))
    slots = slots[order]
    devs = devs[order]
    event_slots, starts = np.unique(slots, return_index=True)
    starts = np.append(starts, slots.size)

    static_rng = entity_stream(cfg.seed, STREAM_STATIC_TRAFFIC)
    static_counts = fast_static_traffic(static_alloc, cfg.tx_prob, static_rng,
                                        n_slots=event_slots.size)

    if policy.kind == "random":
        driver = _RandomDriver(cfg, n_tx)
    elif policy.kind in ("oracle_optimal", "oracle_greedy"):
        driver = _FixedDriver(dynamic_allocation_for(cfg, static_alloc, policy))
    else:
        driver = _BanditDriver(cfg, policy)

    boundaries = list(range(window, cfg.horizon + 1, window))
    if boundaries[-1] != cfg.horizon:
        boundaries.append(cfg.horizon)
    out_slots = np.array(boundaries, dtype=np.int64)
    cum_rates = np.zeros(len(boundaries))
    win_rates = np.zeros(len(boundaries))

    attempts = 0
    successes = 0
    win_attempts_base = 0
    win_successes_base = 0
    next_b = 0

    def flush_through(slot_exclusive: int) -> None:
        nonlocal next_b, win_attempts_base, win_successes_base
        while next_b < len(boundaries) and boundaries[next_b] <= slot_exclusive:
            cum = successes / attempts if attempts else 0.0
            d_att = attempts - win_attempts_base
            d_suc = successes - win_successes_base
            cum_rates[next_b] = cum
            win_rates[next_b] = d_suc / d_att if d_att else cum
            win_attempts_base = attempts
            win_successes_base = successes
            next_b += 1

    choose = driver.choose
    update = driver.update
    for j in range(event_slots.size):
        flush_through(int(event_slots[j]))
        lo = starts[j]
        hi = starts[j + 1]
        row = static_counts[j]
        if hi - lo == 1:
            dev = int(devs[lo])
            ch = choose(dev)
            ack = 1 if row[ch] == 0 else 0
            update(dev, ch, ack)
            attempts += 1
            successes += ack
        else:
            group = [int(d) for d in devs[lo:hi]]
            chans = [choose(dev) for dev in group]
            outcome = resolve_slot(row, chans)
            for dev, ch, ack in zip(group, chans, outcome.dynamic_acks):
                update(dev, ch, 1 if ack else 0)
            attempts += outcome.dynamic_attempts
            successes += outcome.dynamic_successes
    flush_through(cfg.horizon)

    return MetricsSeries(
        window_size=window,
        slots=out_slots,
        cum_rates=cum_rates,
        win_rates=win_rates,
        dynamic_attempts=attempts,
        dynamic_successes=successes,
    )
