import pytest

from iotmab import NetworkConfig

# Uneven static split used by the shipped benchmark scenarios.
BENCH_SPLIT = (0.3, 0.2, 0.1, 0.1, 0.05, 0.05, 0.02, 0.08, 0.01, 0.09)


@pytest.fixture
def bench_config():
    """Benchmark-scale configuration: 2000 devices, 10% dynamic."""
    return NetworkConfig(
        n_channels=10,
        n_static=1800,
        n_dynamic=200,
        tx_prob=1e-3,
        static_split=BENCH_SPLIT,
        horizon=10**6,
        seed=1,
    )


@pytest.fixture
def scaled_config():
    """Scaled-down variant that simulates in well under a second."""
    return NetworkConfig(
        n_channels=10,
        n_static=180,
        n_dynamic=20,
        tx_prob=1e-2,
        static_split=BENCH_SPLIT,
        horizon=10**5,
        seed=3,
    )
