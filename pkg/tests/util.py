"""Shared test helpers: seeded configuration sweeps and a numpy-side
re-evaluation of the single-stage success probability used as a grid oracle
(kept independent of the package's scalar implementation)."""

import math

import numpy as np

from pidr.model import IDEAL, NONIDEAL, Priors
from pidr.numerics import Rng


def success_grid(p0, p1, alpha_i, params, betas):
    """Success probability on an array of displacements."""
    betas = np.asarray(betas, dtype=float)
    st = math.sqrt(params.tau)
    base = params.tau * alpha_i * alpha_i + betas * betas
    cross = 2.0 * params.xi * st * alpha_i * betas
    return p0 * np.exp(-(params.nu + params.eta * (base - cross))) + p1 * (
        1.0 - np.exp(-(params.nu + params.eta * (base + cross)))
    )


def stationarity_configs(count, seed=314159):
    """Seeded (priors, alpha_i, params) tuples spanning both presets,
    p0 in [0.1, 0.9] and alpha_i in [0.05, 4]."""
    rng = Rng(seed)
    out = []
    for i in range(count):
        p0 = 0.1 + 0.8 * rng.uniform()
        alpha_i = 0.05 + 3.95 * rng.uniform()
        params = IDEAL if i % 2 == 0 else NONIDEAL
        out.append((Priors.from_p0(p0), alpha_i, params))
    return out
