"""Domain types, scenario configuration and the deterministic RNG contract.

Every entity that consumes randomness (the static traffic generator, each
dynamic device's transmission clock, each dynamic device's channel policy)
gets its own PCG64 stream derived from the root seed and a stable integer
key, so results never depend on iteration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPLIT_SUM_TOL = 1e-9

# Stream-key namespaces, see entity_stream().
STREAM_STATIC_TRAFFIC = 0
STREAM_DEVICE_CLOCK = 1
STREAM_DEVICE_POLICY = 2


def entity_stream(seed: int, *key: int) -> np.random.Generator:
    """Independent deterministic random stream for one simulated entity.

    Args:
        seed: root seed of the run (64-bit unsigned).
        *key: stable entity key, e.g. ``(STREAM_DEVICE_POLICY, device_index)``.

    Two calls with the same (seed, key) yield generators producing identical
    sequences; distinct keys yield statistically independent streams.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, *key])))


@dataclass(frozen=True)
class Allocation:
    """Integer per-channel device counts (static or dynamic)."""

    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.counts:
            raise ValueError("allocation must cover at least one channel")
        if any(c < 0 for c in self.counts):
            raise ValueError(f"allocation counts must be non-negative, got {self.counts}")
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __len__(self) -> int:
        return len(self.counts)

    def __getitem__(self, i: int) -> int:
        return self.counts[i]


@dataclass(frozen=True)
class NetworkConfig:
    """Full scenario description for one simulation run.

    Args:
        n_channels: number of RF channels, >= 1.
        n_static: devices bound to one fixed channel each.
        n_dynamic: devices free to reselect their channel per transmission.
        tx_prob: per-device per-slot transmit probability, strictly in (0, 1).
        static_split: per-channel fractions of n_static, summing to 1.
        horizon: number of simulated time slots.
        seed: root seed for all derived random streams.
    """

    n_channels: int
    n_static: int
    n_dynamic: int
    tx_prob: float
    static_split: tuple[float, ...]
    horizon: int
    seed: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "static_split", tuple(float(f) for f in self.static_split))
        _check_config(self)

    def static_allocation(self) -> Allocation:
        """Integer static device counts per channel (largest-remainder split)."""
        return split_to_counts(self.static_split, self.n_static)


def _check_config(cfg: NetworkConfig) -> None:
    if cfg.n_channels < 1:
        raise ValueError(f"n_channels must be >= 1, got {cfg.n_channels}")
    if cfg.n_static < 0 or cfg.n_dynamic < 0:
        raise ValueError("device counts must be non-negative")
    if not 0.0 < cfg.tx_prob < 1.0:
        raise ValueError(f"tx_prob must lie strictly inside (0, 1), got {cfg.tx_prob}")
    if len(cfg.static_split) != cfg.n_channels:
        raise ValueError(
            f"static_split has {len(cfg.static_split)} entries for {cfg.n_channels} channels"
        )
    if any(f < 0.0 for f in cfg.static_split):
        raise ValueError(f"static_split entries must be non-negative, got {cfg.static_split}")
    if abs(math.fsum(cfg.static_split) - 1.0) > SPLIT_SUM_TOL:
        raise ValueError(
            f"static_split must sum to 1 within {SPLIT_SUM_TOL}, got {math.fsum(cfg.static_split)!r}"
        )
    if cfg.horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {cfg.horizon}")
    if not 0 <= cfg.seed < 2**64:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {cfg.seed}")


def validate_config(cfg: NetworkConfig) -> NetworkConfig:
    """Validate cfg and return it unchanged (idempotent).

    Raises ValueError with a descriptive message on any violated invariant.
    Construction already validates; this re-checks configs produced through
    dataclasses.replace or deserialization.
    """
    _check_config(cfg)
    return cfg


def split_to_counts(split: tuple[float, ...], total: int) -> Allocation:
    """Apportion `total` devices over channels by largest-remainder rounding.

    The result sums exactly to `total` and each count differs from the exact
    share total*split[i] by less than 1. Remainder ties go to the lowest
    channel index.
    """
    if total < 0:
        raise ValueError(f"total must be non-negative, got {total}")
    if any(f < 0.0 for f in split):
        raise ValueError(f"split entries must be non-negative, got {split}")
    if abs(math.fsum(split) - 1.0) > SPLIT_SUM_TOL:
        raise ValueError(f"split must sum to 1 within {SPLIT_SUM_TOL}, got {math.fsum(split)!r}")
    shares = [total * f for f in split]
    counts = [math.floor(s) for s in shares]
    remainder = total - sum(counts)
    by_fraction = sorted(range(len(split)), key=lambda i: (counts[i] - shares[i], i))
    for i in by_fraction[:remainder]:
        counts[i] += 1
    return Allocation(tuple(counts))


@dataclass(frozen=True)
class PolicyKind:
    """Channel-selection policy tag for a simulation run.

    kind is one of "random", "oracle_optimal", "oracle_greedy", "ucb1",
    "thompson"; alpha is the UCB1 exploration weight and must be positive
    (it is ignored by the other kinds).
    """

    kind: str
    alpha: float = 0.5

    KINDS = ("random", "oracle_optimal", "oracle_greedy", "ucb1", "thompson")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown policy kind {self.kind!r}, expected one of {self.KINDS}")
        if self.kind == "ucb1" and not self.alpha > 0.0:
            raise ValueError(f"ucb1 requires alpha > 0, got {self.alpha}")

    @property
    def label(self) -> str:
        """Canonical name used in CSV output and plots."""
        if self.kind == "ucb1" and self.alpha != 0.5:
            return f"ucb1({self.alpha:g})"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> PolicyKind:
        """Parse a policy label such as "random", "ucb1" or "ucb1(0.25)"."""
        text = text.strip()
        if text.startswith("ucb1(") and text.endswith(")"):
            try:
                alpha = float(text[5:-1])
            except ValueError:
                raise ValueError(f"bad ucb1 alpha in {text!r}") from None
            return cls("ucb1", alpha)
        return cls(text)
