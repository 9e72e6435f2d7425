"""Trial-level Monte Carlo oracle for the partitioned receiver.

Simulates the click sequence directly: each trial draws a true bit from the
priors, then walks the stages.  The stage's nulled (favored) hypothesis is
the current tentative decision -- H0 before any measurement -- and the
Poisson click mean is

    mu = nu + eta (tau a_i^2 + b_i^2 -/+ 2 xi sqrt(tau) a_i b_i)

with the minus sign when the truth matches the favored hypothesis.  No click
keeps the tentative decision; a click flips it.  The displacements b_i come
from the analytic cascade trace (they are deterministic per stage), so the
simulation is independent of the analytic recursion exactly where it matters:
in the click statistics.

Determinism: ``simulate_cascade`` consumes exactly one 64-bit draw from the
passed rng as the stream key; trial t then uses the substream
``derive_seed(key, t)``.  Sharding trials across workers by index therefore
cannot change the merged result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .cascade import cascade_error
from .errors import ZeroTrials
from .model import DeviceParams, OperatingPoint, Partition, Priors
from .numerics import Rng


@dataclass(frozen=True)
class McResult:
    """Empirical error rate with its binomial standard error."""

    trials: int
    errors: int
    p_hat: float
    std_err: float


@dataclass(frozen=True)
class StageOutcome:
    """One stage of one trial: sampled photon count and the tentative
    decision after the stage (flips relative to the previous tentative bit
    iff k_i >= 1)."""

    k_i: int
    decision_after: int


def _stage_means(
    partition: Partition,
    op: OperatingPoint,
    priors: Priors,
    params: DeviceParams,
):
    """Click means per stage for truth==tentative / truth!=tentative, the
    no-op mask, and the analytic trace they derive from."""
    result = cascade_error(partition, op, priors, params)
    n = len(result.stages)
    mu_match = np.zeros(n)
    mu_mismatch = np.zeros(n)
    noop = np.zeros(n, dtype=np.uint8)
    st = math.sqrt(params.tau)
    for i, stage in enumerate(result.stages):
        if stage.noop:
            noop[i] = 1
            continue
        base = params.tau * stage.alpha_i**2 + stage.beta_star**2
        cross = 2.0 * params.xi * st * stage.alpha_i * stage.beta_star
        # means are >= nu mathematically; clamp rounding noise
        mu_match[i] = max(0.0, params.nu + params.eta * (base - cross))
        mu_mismatch[i] = max(0.0, params.nu + params.eta * (base + cross))
    return mu_match, mu_mismatch, noop, result


def simulate_cascade(
    partition: Partition,
    op: OperatingPoint,
    priors: Priors,
    params: DeviceParams,
    trials: int,
    rng: Rng,
    _flip_labels: bool = False,
) -> McResult:
    """Estimate the cascade error rate from `trials` independent trials."""
    if trials < 1:
        raise ZeroTrials(f"trials must be >= 1, got {trials}")
    mu_match, mu_mismatch, noop, _ = _stage_means(partition, op, priors, params)
    key = np.uint64(rng.next_u64())
    errors = int(
        _kernels._mc_errors(
            key, trials, priors.p1, mu_match, mu_mismatch, noop, _flip_labels
        )
    )
    p_hat = errors / trials
    return McResult(
        trials=trials,
        errors=errors,
        p_hat=p_hat,
        std_err=math.sqrt(p_hat * (1.0 - p_hat) / trials),
    )


def simulate_trials(
    partition: Partition,
    op: OperatingPoint,
    priors: Priors,
    params: DeviceParams,
    trials: int,
    rng: Rng,
) -> tuple[McResult, list[int], list[list[StageOutcome]]]:
    """Like :func:`simulate_cascade` but also returns each trial's true bit
    and per-stage outcomes.  Same substream rule, so aggregate statistics are
    identical for the same key; intended for inspection and tests, not for
    large trial counts."""
    if trials < 1:
        raise ZeroTrials(f"trials must be >= 1, got {trials}")
    mu_match, mu_mismatch, noop, _ = _stage_means(partition, op, priors, params)
    key = np.uint64(rng.next_u64())
    n = len(partition.fractions)
    truth = np.empty(trials, dtype=np.int64)
    counts = np.empty((trials, n), dtype=np.int64)
    tentative = np.empty((trials, n), dtype=np.int64)
    errors = int(
        _kernels._mc_trace(
            key, trials, priors.p1, mu_match, mu_mismatch, noop, False,
            truth, counts, tentative,
        )
    )
    p_hat = errors / trials
    result = McResult(
        trials=trials,
        errors=errors,
        p_hat=p_hat,
        std_err=math.sqrt(p_hat * (1.0 - p_hat) / trials),
    )
    outcomes = [
        [StageOutcome(int(counts[t, i]), int(tentative[t, i])) for i in range(n)]
        for t in range(trials)
    ]
    return result, [int(b) for b in truth], outcomes
