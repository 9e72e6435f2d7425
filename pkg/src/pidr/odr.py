"""Single-stage optimal displacement receiver with non-ideal devices.

The receiver displaces the incoming coherent state by a local field beta and
photon-counts the result; "no click" decides H0 (the nulled hypothesis).
Success probability for priors (p0, p1), segment amplitude alpha_i and
displacement beta:

    P(C) = p0 exp(-nu - eta (tau a^2 + b^2 - 2 xi sqrt(tau) a b))
         + p1 [1 - exp(-nu - eta (tau a^2 + b^2 + 2 xi sqrt(tau) a b))]

The maximizing displacement solves the stationarity condition

    p0 (b - m) / [p1 (b + m)] = exp(-4 eta m b),   m = xi sqrt(tau) alpha_i,

which has exactly one root on (m, inf) and one on (-inf, -m).  Both are
solved and the one with larger P(C) wins (ties to the positive root); for
the formula above the positive root is the global maximizer.
"""

from __future__ import annotations

import math

from . import _kernels
from .errors import DegeneratePriors, DegenerateSignal, NumericalFailure
from .model import DeviceParams, Priors

#: Segment amplitudes at or below this are treated as carrying no signal.
ALPHA_FLOOR = _kernels.ALPHA_FLOOR

#: Fractions below this are dropped as no-op stages by the cascade.
DROP_FRACTION = _kernels.DROP_FRACTION


def success_probability(
    priors: Priors, alpha_i: float, beta: float, params: DeviceParams
) -> float:
    """P(correct) for a single displaced-photon-counting measurement.

    Total function of its (finite) inputs; the value is clamped to [0, 1]
    only against sub-1e-15 floating excursions.
    """
    st = math.sqrt(params.tau)
    base = params.tau * alpha_i * alpha_i + beta * beta
    cross = 2.0 * params.xi * st * alpha_i * beta
    a_exp = params.nu + params.eta * (base - cross)
    b_exp = params.nu + params.eta * (base + cross)
    p = priors.p0 * math.exp(-a_exp) + priors.p1 * (1.0 - math.exp(-b_exp))
    if -1e-15 < p < 0.0:
        return 0.0
    if 1.0 < p < 1.0 + 1e-15:
        return 1.0
    return p


def solve_optimal_displacement(
    priors: Priors, alpha_i: float, params: DeviceParams
) -> float:
    """Displacement beta* maximizing :func:`success_probability`.

    Raises:
        DegeneratePriors: if p0 is 0 or 1 (the stationarity condition is
            undefined there).
        DegenerateSignal: if alpha_i is at or below the no-signal floor;
            callers must apply the no-op stage rule instead.
        NumericalFailure: if bracket expansion fails (not reachable for
            valid device parameters).
    """
    if not 0.0 < priors.p0 < 1.0:
        raise DegeneratePriors(f"p0 must be strictly inside (0, 1), got {priors.p0}")
    if alpha_i <= ALPHA_FLOOR:
        raise DegenerateSignal(
            f"alpha_i = {alpha_i} is below the drop threshold; stage is a no-op"
        )
    beta = _kernels._solve_beta(
        priors.p0, priors.p1, alpha_i, params.eta, params.nu, params.tau, params.xi
    )
    if math.isnan(beta):
        raise NumericalFailure("displacement root bracketing failed")
    return beta


def stage_error(
    priors: Priors, alpha_i: float, params: DeviceParams
) -> tuple[float, float]:
    """(beta*, stage error probability) for one segment.

    The error 1 - P(C) is evaluated in the complementary form
    p0 (1 - e^{-A}) + p1 e^{-B}, which keeps tiny errors exact where
    P(C) itself would round to 1.  Below the no-signal floor the stage is a
    no-op: the error equals the prior p1 and beta* is NaN.
    """
    if not 0.0 < priors.p0 < 1.0:
        raise DegeneratePriors(f"p0 must be strictly inside (0, 1), got {priors.p0}")
    if alpha_i <= ALPHA_FLOOR:
        return math.nan, priors.p1
    beta, pe = _kernels._stage_pe(
        priors.p0, priors.p1, alpha_i, params.eta, params.nu, params.tau, params.xi
    )
    if math.isnan(pe):
        raise NumericalFailure("displacement root bracketing failed")
    return beta, pe
