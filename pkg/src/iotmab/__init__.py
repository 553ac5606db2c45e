"""Slotted-ALOHA IoT network simulator with decentralized bandit channel selection."""

from .analytic import allocation_success, random_policy_success
from .bandit import TsState, Ucb1State, beta_sample
from .core import (
    Allocation,
    NetworkConfig,
    PolicyKind,
    entity_stream,
    split_to_counts,
    validate_config,
)
from .experiment import Scenario, load_scenario, run_scenario, summarize_gains
from .oracle import (
    ConvergenceError,
    OverCapacityError,
    RealAllocation,
    brute_force_allocation,
    greedy_allocation,
    lambert_w0,
    optimal_real_allocation,
    round_allocation,
)
from .sim import MetricsSeries, SlotOutcome, fast_static_traffic, resolve_slot, run_simulation

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "ConvergenceError",
    "MetricsSeries",
    "NetworkConfig",
    "OverCapacityError",
    "PolicyKind",
    "RealAllocation",
    "Scenario",
    "SlotOutcome",
    "TsState",
    "Ucb1State",
    "allocation_success",
    "beta_sample",
    "brute_force_allocation",
    "entity_stream",
    "fast_static_traffic",
    "greedy_allocation",
    "lambert_w0",
    "load_scenario",
    "optimal_real_allocation",
    "random_policy_success",
    "resolve_slot",
    "round_allocation",
    "run_scenario",
    "run_simulation",
    "split_to_counts",
    "summarize_gains",
    "validate_config",
]
