"""Benchmark curves: Helstrom bound, standard quantum limit, gain over SQL.

For binary coherent states of overlap |<-a|a>|^2 = exp(-4 nbar):

    P_Helstrom = 1/2 [1 - sqrt(1 - 4 p0 p1 exp(-4 nbar))]
    P_SQL      = 1/2 erfc(sqrt(2 nbar))        (equal priors, homodyne)

Gain over SQL is reported in decibels, 10 log10(P_SQL / P_E): positive when
the receiver beats the SQL, negative when it is worse.
"""

from __future__ import annotations

import math

from .errors import NegativeEnergy, NonPositiveProbability
from .model import Priors
from .numerics import erfc


def helstrom_bound(nbar: float, priors: Priors) -> float:
    """Minimum achievable error probability for the two signals."""
    if nbar < 0.0 or nbar != nbar:
        raise NegativeEnergy(f"nbar must be >= 0, got {nbar}")
    y = 4.0 * priors.p0 * priors.p1 * math.exp(-4.0 * nbar)
    disc = 1.0 - y
    if disc < 0.0:  # floating rounding only; mathematically >= 0
        disc = 0.0
    # 1 - sqrt(1-y) written cancellation-free as y / (1 + sqrt(1-y))
    return 0.5 * y / (1.0 + math.sqrt(disc))


def sql_limit(nbar: float) -> float:
    """Homodyne-detection limit; defined for equal priors only."""
    if nbar < 0.0 or nbar != nbar:
        raise NegativeEnergy(f"nbar must be >= 0, got {nbar}")
    return 0.5 * erfc(math.sqrt(2.0 * nbar))


def gain_db(pe: float, p_sql: float) -> float:
    """Decibel gain of an error probability over the SQL reference."""
    if not pe > 0.0:
        raise NonPositiveProbability(f"pe must be > 0, got {pe}")
    if not p_sql > 0.0:
        raise NonPositiveProbability(f"p_sql must be > 0, got {p_sql}")
    return 10.0 * math.log10(p_sql / pe)
