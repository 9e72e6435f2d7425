"""Typed errors raised on contract violations.

Every precondition failure maps to one of these, so callers (and the CLI)
can distinguish bad input (usage) from numerical breakdown.
"""


class PidrError(Exception):
    """Base class for all package errors."""


class InvariantViolation(PidrError, ValueError):
    """A value object was constructed with fields violating its invariants."""


class NoSignChange(PidrError, ValueError):
    """Root bracket endpoints have the same sign."""


class BadStart(PidrError, ValueError):
    """A simplex-optimizer start point is outside the open probability simplex."""


class NegativeMean(PidrError, ValueError):
    """Poisson mean is negative."""


class InvalidN(PidrError, ValueError):
    """Segment count must be a positive integer."""


class NegativeEnergy(PidrError, ValueError):
    """Mean photon number must be non-negative."""


class DegeneratePriors(PidrError, ValueError):
    """Displacement equation is undefined for p0 in {0, 1}."""


class DegenerateSignal(PidrError, ValueError):
    """Segment amplitude is below the drop threshold; use the no-op stage rule."""


class NonPositiveProbability(PidrError, ValueError):
    """Probability argument must be strictly positive."""


class ZeroTrials(PidrError, ValueError):
    """Monte Carlo trial count must be at least 1."""


class NumericalFailure(PidrError, RuntimeError):
    """A solver or optimizer failed to converge; indicates a genuine breakdown."""
