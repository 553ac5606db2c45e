"""Per-device sequential channel policies: UCB1 and Thompson Sampling.

Each dynamic device owns one state object and one private random stream.
The device's clock is local: choose() is called once per own transmission
and update() once with the resulting Ack (1) or collision (0), so state
advances with the device's access count, not with global slots.
"""

from __future__ import annotations

import math

import numpy as np


class Ucb1State:
    """UCB1 with exploration weight alpha on a fixed set of channels.

    Index of channel k after t own transmissions:
        mean_k + sqrt(alpha * ln(t) / pulls_k)        (natural log)
    Until every channel has been tried once, channels are forced in index
    order. Ties in the index break uniformly at random, which keeps a fleet
    of identically-initialized devices from herding onto one channel.
    """

    __slots__ = ("alpha", "pulls", "reward_sums", "local_time", "_untried")

    def __init__(self, n_channels: int, alpha: float = 0.5):
        if n_channels < 1:
            raise ValueError(f"need at least one channel, got {n_channels}")
        if not alpha > 0.0:
            raise ValueError(f"alpha must be positive, got {alpha}")
        self.alpha = alpha
        self.pulls = np.zeros(n_channels, dtype=np.int64)
        self.reward_sums = np.zeros(n_channels, dtype=np.int64)
        self.local_time = 0
        self._untried = n_channels

    @property
    def n_channels(self) -> int:
        return self.pulls.size

    def choose(self, rng: np.random.Generator) -> int:
        if self._untried:
            return int(np.flatnonzero(self.pulls == 0)[0])
        bonus = math.sqrt(self.alpha * math.log(self.local_time))
        index = self.reward_sums / self.pulls + bonus / np.sqrt(self.pulls)
        top = np.flatnonzero(index == index.max())
        if top.size == 1:
            return int(top[0])
        return int(top[rng.integers(top.size)])

    def update(self, arm: int, reward: int) -> None:
        if self.pulls[arm] == 0:
            self._untried -= 1
        self.pulls[arm] += 1
        self.reward_sums[arm] += reward
        self.local_time += 1


class TsState:
    """Thompson Sampling with a Beta(1, 1) prior per channel.

    a[k] - 1 counts Acks on channel k, b[k] - 1 counts collisions. choose()
    samples one Beta(a[k], b[k]) index per channel and plays the argmax
    (ties, a measure-zero event, resolve to the lowest index).
    """

    __slots__ = ("a", "b")

    def __init__(self, n_channels: int):
        if n_channels < 1:
            raise ValueError(f"need at least one channel, got {n_channels}")
        self.a = np.ones(n_channels, dtype=np.int64)
        self.b = np.ones(n_channels, dtype=np.int64)

    @property
    def n_channels(self) -> int:
        return self.a.size

    def choose(self, rng: np.random.Generator) -> int:
        samples = beta_sample_many(self.a, self.b, rng)
        return int(np.argmax(samples))

    def update(self, arm: int, reward: int) -> None:
        if reward:
            self.a[arm] += 1
        else:
            self.b[arm] += 1


def gamma_sample_many(shape: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Gamma(shape, 1) draws for shape >= 1, Marsaglia-Tsang squeeze method.

    Per element: d = shape - 1/3, c = 1/sqrt(9d); propose d*(1 + c*x)**3 with
    x standard normal and accept against a uniform u using the log test
    ln(u) < x**2/2 + d - d*v + d*ln(v). Acceptance is ~96% at shape 1 and
    higher above, so the rejection loop almost always finishes in one pass.
    """
    shape = np.asarray(shape, dtype=np.float64)
    if shape.ndim != 1 or shape.size == 0 or np.any(shape < 1.0):
        raise ValueError("gamma_sample_many expects a 1-d array of shapes >= 1")
    d = shape - 1.0 / 3.0
    c = 1.0 / np.sqrt(9.0 * d)
    out = np.empty(shape.size, dtype=np.float64)
    pending = np.arange(shape.size)
    while pending.size:
        x = rng.standard_normal(pending.size)
        u = rng.random(pending.size)
        dp = d[pending]
        v = (1.0 + c[pending] * x) ** 3
        pos = v > 0.0
        log_v = np.log(np.where(pos, v, 1.0))
        accept = pos & (np.log(u) < 0.5 * x * x + dp * (1.0 - v + log_v))
        out[pending[accept]] = dp[accept] * v[accept]
        pending = pending[~accept]
    return out


def beta_sample_many(a: np.ndarray, b: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One Beta(a[k], b[k]) draw per element, via two Gamma draws each."""
    n = len(a)
    g = gamma_sample_many(np.concatenate([a, b]), rng)
    return g[:n] / (g[:n] + g[n:])


def beta_sample(a: int, b: int, rng: np.random.Generator) -> float:
    """A single Beta(a, b) draw, a and b integer shapes >= 1."""
    if a < 1 or b < 1:
        raise ValueError(f"beta_sample requires shapes >= 1, got a={a}, b={b}")
    g = gamma_sample_many(np.array([a, b], dtype=np.float64), rng)
    return float(g[0] / (g[0] + g[1]))
