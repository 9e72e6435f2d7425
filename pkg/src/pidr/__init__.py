"""Partitioned-interval displacement receiver for binary coherent states.

Computes, optimizes and validates the error probability of an N-segment
displaced-photon-counting receiver with non-ideal devices, alongside the
Helstrom bound and the standard quantum limit.
"""

from .bounds import gain_db, helstrom_bound, sql_limit
from .cascade import (
    cascade_error,
    global_sequence,
    nested_sequence,
    strategy_global,
    strategy_identical,
    strategy_nested,
)
from .model import (
    IDEAL,
    NONIDEAL,
    PRESETS,
    CascadeResult,
    DeviceParams,
    OperatingPoint,
    Partition,
    Priors,
    StageRecord,
    identical_partition,
    operating_point_from_nbar,
)
from .montecarlo import McResult, StageOutcome, simulate_cascade, simulate_trials
from .numerics import Bracket, Rng, derive_seed, erfc, find_root_monotone, minimize_1d, minimize_simplex, poisson_sample
from .odr import solve_optimal_displacement, stage_error, success_probability

__version__ = "0.1.0"

__all__ = [
    "Bracket",
    "CascadeResult",
    "DeviceParams",
    "IDEAL",
    "McResult",
    "NONIDEAL",
    "OperatingPoint",
    "PRESETS",
    "Partition",
    "Priors",
    "Rng",
    "StageOutcome",
    "StageRecord",
    "cascade_error",
    "derive_seed",
    "erfc",
    "find_root_monotone",
    "gain_db",
    "global_sequence",
    "helstrom_bound",
    "identical_partition",
    "minimize_1d",
    "minimize_simplex",
    "nested_sequence",
    "operating_point_from_nbar",
    "poisson_sample",
    "simulate_cascade",
    "simulate_trials",
    "solve_optimal_displacement",
    "sql_limit",
    "stage_error",
    "strategy_global",
    "strategy_identical",
    "strategy_nested",
    "success_probability",
]
