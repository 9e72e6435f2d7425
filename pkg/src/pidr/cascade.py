"""Partitioned receiver: stage recursion and the three partition strategies.

The cascade measures segment i with the single-stage receiver and feeds the
resulting error probability forward as the next stage's prior of being
wrong: stage 1 runs with the given (p0, p1); for i >= 2 the stage priors are
p1_i = P_e(stage i-1), p0_i = 1 - p1_i.  The final error probability is the
last stage's error.

Note the index convention: the prior of stage i is the error probability
*after* stage i-1.  (Reading the recursion as "stage i's prior equals stage
i's own error" would be circular.)

Strategies:

* ``strategy_identical`` - equal fractions 1/N.
* ``strategy_nested`` - greedy recursion: scale the (N-1)-segment solution
  by s and append a final segment 1-s, optimizing the single scalar s.
* ``strategy_global`` - multistart Nelder-Mead over the full simplex of
  ordered fractions, always seeded with the identical partition, the nested
  solution, and the zero-padded (N-1)-segment global solution, plus 13
  random interior starts.  This start set makes the results monotone:
  global(N) <= identical(N), nested(N), and global(N-1).
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels
from .errors import DegeneratePriors, InvalidN, NumericalFailure
from .model import (
    CascadeResult,
    DeviceParams,
    OperatingPoint,
    Partition,
    Priors,
    StageRecord,
    identical_partition,
)
from .numerics import Rng, minimize_1d, minimize_simplex

#: interior stand-in for a dropped segment when a start must stay inside the
#: open simplex; below DROP_FRACTION, so the stage is still a no-op
_PAD_FRACTION = 1e-10


def cascade_pe(
    fractions, alpha: float, p0: float, p1: float, params: DeviceParams
) -> float:
    """P_E for raw fractions; fast path shared by the strategy objectives."""
    arr = np.ascontiguousarray(fractions, dtype=np.float64)
    pe = _kernels._cascade_pe(
        arr, alpha, p0, p1, params.eta, params.nu, params.tau, params.xi
    )
    if math.isnan(pe):
        raise NumericalFailure("cascade stage solve failed")
    return pe


def cascade_error(
    partition: Partition,
    op: OperatingPoint,
    priors: Priors,
    params: DeviceParams,
) -> CascadeResult:
    """Run the full stage recursion and return the per-stage trace."""
    if not 0.0 < priors.p0 < 1.0:
        raise DegeneratePriors(f"p0 must be strictly inside (0, 1), got {priors.p0}")
    fracs = np.asarray(partition.fractions, dtype=np.float64)
    n = len(fracs)
    betas = np.empty(n)
    pes = np.empty(n)
    p1s = np.empty(n)
    noop = np.zeros(n, dtype=np.uint8)
    p_error = _kernels._cascade_trace(
        fracs, op.alpha, priors.p0, priors.p1,
        params.eta, params.nu, params.tau, params.xi,
        betas, pes, p1s, noop,
    )
    if math.isnan(p_error):
        raise NumericalFailure("cascade stage solve failed")
    stages = tuple(
        StageRecord(
            index=i + 1,
            alpha_i=op.alpha * math.sqrt(fracs[i]) if fracs[i] > 0.0 else 0.0,
            p0_i=1.0 - p1s[i],
            p1_i=float(p1s[i]),
            beta_star=float(betas[i]),
            pe_stage=float(pes[i]),
            noop=bool(noop[i]),
        )
        for i in range(n)
    )
    return CascadeResult(stages=stages, p_error=float(p_error))


def strategy_identical(
    n: int, op: OperatingPoint, priors: Priors, params: DeviceParams
) -> tuple[Partition, CascadeResult]:
    """Equal-fraction partition."""
    partition = identical_partition(n)
    return partition, cascade_error(partition, op, priors, params)


def nested_sequence(
    n: int, op: OperatingPoint, priors: Priors, params: DeviceParams
) -> list[tuple[Partition, CascadeResult]]:
    """All nested solutions for 1..n segments (the recursion's intermediates).

    Level k minimizes over s in (0, 1) the cascade error of
    [s*f_1, ..., s*f_{k-1}, 1-s] built from the level k-1 fractions.
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidN(f"segment count must be an integer >= 1, got {n}")
    partition = Partition((1.0,))
    out = [(partition, cascade_error(partition, op, priors, params))]
    fracs = [1.0]
    for _ in range(2, n + 1):
        prev = list(fracs)

        def objective(s: float) -> float:
            cand = [s * x for x in prev] + [1.0 - s]
            return cascade_pe(cand, op.alpha, priors.p0, priors.p1, params)

        s_star, _ = minimize_1d(objective, 0.0, 1.0)
        fracs = [s_star * x for x in prev] + [1.0 - s_star]
        partition = Partition(tuple(fracs))
        out.append((partition, cascade_error(partition, op, priors, params)))
    return out


def strategy_nested(
    n: int, op: OperatingPoint, priors: Priors, params: DeviceParams
) -> tuple[Partition, CascadeResult]:
    """Greedy nested construction (scale previous solution, optimize the
    last fraction)."""
    return nested_sequence(n, op, priors, params)[-1]


def _interior(fractions) -> np.ndarray:
    # clamp boundary fractions into the open simplex so softmax coordinates
    # exist; clamped entries stay below the drop threshold (identical P_E)
    f = np.maximum(np.asarray(fractions, dtype=float), _PAD_FRACTION)
    return f / f.sum()


def global_sequence(
    n: int,
    op: OperatingPoint,
    priors: Priors,
    params: DeviceParams,
    rng: Rng,
) -> list[tuple[Partition, CascadeResult]]:
    """Globally optimized partitions for 1..n segments.

    Level k seeds the multistart with the identical partition, the nested
    solution, and the level k-1 result padded by an interior stand-in
    fraction, plus 13 random interior starts drawn from ``rng.split(k)``
    (so the whole chain is deterministic given the rng seed and no generator
    state is ever consumed).  Besides the Nelder-Mead results, the exact
    candidate partitions (identical, nested, zero-padded previous level)
    compete for the returned minimum, which makes the chain monotone:
    global(k) <= identical(k), nested(k), global(k-1).
    """
    if not isinstance(n, int) or n < 1:
        raise InvalidN(f"segment count must be an integer >= 1, got {n}")
    alpha, p0, p1 = op.alpha, priors.p0, priors.p1
    eta, nu, tau, xi = params.eta, params.nu, params.tau, params.xi
    kernel = _kernels._cascade_pe

    def objective(f) -> float:
        pe = kernel(np.asarray(f, dtype=np.float64), alpha, p0, p1, eta, nu, tau, xi)
        if math.isnan(pe):
            raise NumericalFailure("cascade stage solve failed")
        return pe

    nested_all = nested_sequence(n, op, priors, params)
    first = Partition((1.0,))
    seq = [(first, cascade_error(first, op, priors, params))]
    for k in range(2, n + 1):
        prev_partition = seq[-1][0]
        nested_partition = nested_all[k - 1][0]
        ident_partition = identical_partition(k)
        prev_padded = [x * (1.0 - _PAD_FRACTION) for x in prev_partition.fractions]
        starts = [
            np.asarray(ident_partition.fractions),
            _interior(nested_partition.fractions),
            _interior(prev_padded + [_PAD_FRACTION]),
        ]
        best_f, best_v = minimize_simplex(
            objective, k, starts, rng=rng.split(k), n_random_starts=13
        )
        best = Partition(tuple(float(x) for x in best_f))
        # exact candidates: zero-padding reproduces the previous level's
        # value bit for bit via the no-op rule
        for cand in (
            ident_partition,
            nested_partition,
            Partition(prev_partition.fractions + (0.0,)),
        ):
            v = objective(cand.fractions)
            if v < best_v:
                best_v = v
                best = cand
        seq.append((best, cascade_error(best, op, priors, params)))
    return seq


def strategy_global(
    n: int,
    op: OperatingPoint,
    priors: Priors,
    params: DeviceParams,
    rng: Rng,
) -> tuple[Partition, CascadeResult]:
    """Multistart simplex optimization of the ordered fractions; see
    :func:`global_sequence` for the start-set construction."""
    return global_sequence(n, op, priors, params, rng)[-1]
