"""Compiled inner loops (numba).

These are specialized, array-level twins of the algorithms exposed in
:mod:`pidr.numerics` and :mod:`pidr.odr`: the safeguarded-bisection root
solve of the displacement stationarity equation, the stage cascade, and the
Monte Carlo trial loop with the xoshiro256** / splitmix64 generator and
inversion/PTRS Poisson sampling.  Pure IEEE float and 64-bit integer
arithmetic, no fastmath, no threading: results are bit-reproducible.

The Python-level modules own validation and typed errors; everything here
assumes preconditions hold.  Functions returning NaN signal numerical
failure to the wrapper.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

# fraction below which a segment is dropped as a no-op stage
DROP_FRACTION = 1e-9
# amplitude below which a stage is treated as carrying no signal at all
ALPHA_FLOOR = 1e-12

_U64 = np.uint64
_GAMMA = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)


# ---------------------------------------------------------------------------
# displacement solve and cascade
# ---------------------------------------------------------------------------


@njit(cache=True)
def _success_prob(p0, p1, alpha_i, beta, eta, nu, tau, xi):
    # p0 e^{-A} + p1 (1 - e^{-B}); A/B are the no-click exponents under
    # H0/H1 for displacement beta
    st = math.sqrt(tau)
    base = tau * alpha_i * alpha_i + beta * beta
    cross = 2.0 * xi * st * alpha_i * beta
    a_exp = nu + eta * (base - cross)
    b_exp = nu + eta * (base + cross)
    return p0 * math.exp(-a_exp) + p1 * (1.0 - math.exp(-b_exp))


@njit(cache=True)
def _root_increasing(lpr, a, c):
    """Root of R(x) = lpr + ln(x-a) - ln(x+a) + c*x on (a, inf).

    R is strictly increasing there with R(a+) = -inf and R(inf) = +inf, so
    the root exists and is unique.  Safeguarded Newton inside a bisection
    bracket; terminates at relative bracket width 1e-15.  When the root is
    squeezed against ``a`` below float resolution, returns ``a``.
    """
    lo = a * (1.0 + 1e-12)
    if lo <= a:
        lo = math.nextafter(a, math.inf)
    r_lo = lpr + math.log(lo - a) - math.log(lo + a) + c * lo
    if r_lo >= 0.0:
        # shrink geometrically toward the singular endpoint
        for _ in range(200):
            nxt = a + (lo - a) / 16.0
            if nxt <= a or nxt >= lo:
                return a
            lo = nxt
            r_lo = lpr + math.log(lo - a) - math.log(lo + a) + c * lo
            if r_lo < 0.0:
                break
        else:
            return a
    hi = a + 1.0
    r_hi = lpr + math.log(hi - a) - math.log(hi + a) + c * hi
    expansions = 0
    while r_hi <= 0.0:
        hi = a + (hi - a) * 4.0
        expansions += 1
        if expansions > 200 or hi - a > 1e300:
            return math.nan
        r_hi = lpr + math.log(hi - a) - math.log(hi + a) + c * hi
    x = 0.5 * (lo + hi)
    for _ in range(200):
        r = lpr + math.log(x - a) - math.log(x + a) + c * x
        if r == 0.0:
            return x
        if r > 0.0:
            hi = x
        else:
            lo = x
        if hi - lo <= 1e-15 * max(1.0, abs(x)):
            break
        dr = 1.0 / (x - a) - 1.0 / (x + a) + c
        xn = x - r / dr
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if xn == x:
            break
        x = xn
    return x


@njit(cache=True)
def _solve_beta(p0, p1, alpha_i, eta, nu, tau, xi):
    """Maximizing displacement for one stage.

    Solves the stationarity condition p0 (b - a) / [p1 (b + a)] =
    exp(-4 eta a b) with a = xi sqrt(tau) alpha_i on both branches
    (b > a and b < -a; the negative branch maps to the positive one with the
    prior log-ratio negated) and returns the branch with the larger success
    probability, ties to the positive branch.
    """
    a = xi * math.sqrt(tau) * alpha_i
    c = 4.0 * eta * a
    lpr = math.log(p0) - math.log(p1)
    b_pos = _root_increasing(lpr, a, c)
    g_neg = _root_increasing(-lpr, a, c)
    if math.isnan(b_pos) or math.isnan(g_neg):
        return math.nan
    b_neg = -g_neg
    p_pos = _success_prob(p0, p1, alpha_i, b_pos, eta, nu, tau, xi)
    p_neg = _success_prob(p0, p1, alpha_i, b_neg, eta, nu, tau, xi)
    if p_pos >= p_neg:
        return b_pos
    return b_neg


@njit(cache=True)
def _stage_pe(p0, p1, alpha_i, eta, nu, tau, xi):
    """(beta_star, stage error).  Error evaluated in the complementary form
    p0 (1 - e^{-A}) + p1 e^{-B}, which stays accurate when the success
    probability rounds to 1."""
    beta = _solve_beta(p0, p1, alpha_i, eta, nu, tau, xi)
    if math.isnan(beta):
        return math.nan, math.nan
    st = math.sqrt(tau)
    base = tau * alpha_i * alpha_i + beta * beta
    cross = 2.0 * xi * st * alpha_i * beta
    # both exponents are >= nu mathematically; clamp away rounding noise so
    # tiny stage errors cannot come out negative
    a_exp = nu + eta * (base - cross)
    if a_exp < 0.0:
        a_exp = 0.0
    b_exp = nu + eta * (base + cross)
    if b_exp < 0.0:
        b_exp = 0.0
    pe = p0 * (-math.expm1(-a_exp)) + p1 * math.exp(-b_exp)
    return beta, pe


@njit(cache=True)
def _cascade_trace(fracs, alpha, p0, p1, eta, nu, tau, xi,
                   beta_out, pe_out, p1_out, noop_out):
    """Run the stage recursion, filling per-stage arrays; returns P_E.

    Stage 1 uses (p0, p1); stage i >= 2 uses p1_i = previous stage error.
    Segments with fraction < DROP_FRACTION (or no signal) are no-ops that
    carry the running error forward unchanged.
    """
    q0 = p0
    q1 = p1
    pe = q1
    for i in range(fracs.shape[0]):
        f = fracs[i]
        p1_out[i] = q1
        alpha_i = alpha * math.sqrt(f) if f > 0.0 else 0.0
        if (f < DROP_FRACTION or alpha_i <= ALPHA_FLOOR
                or q1 <= 0.0 or q1 >= 1.0):
            pe = q1
            beta_out[i] = math.nan
            noop_out[i] = 1
        else:
            beta, pe = _stage_pe(q0, q1, alpha_i, eta, nu, tau, xi)
            if math.isnan(pe):
                return math.nan
            beta_out[i] = beta
            noop_out[i] = 0
        pe_out[i] = pe
        q1 = pe
        q0 = 1.0 - pe
    return pe


@njit(cache=True)
def _cascade_pe(fracs, alpha, p0, p1, eta, nu, tau, xi):
    """P_E only; allocation-free fast path for optimizer objectives."""
    q0 = p0
    q1 = p1
    pe = q1
    for i in range(fracs.shape[0]):
        f = fracs[i]
        alpha_i = alpha * math.sqrt(f) if f > 0.0 else 0.0
        if (f < DROP_FRACTION or alpha_i <= ALPHA_FLOOR
                or q1 <= 0.0 or q1 >= 1.0):
            pe = q1
        else:
            beta, pe = _stage_pe(q0, q1, alpha_i, eta, nu, tau, xi)
            if math.isnan(pe):
                return math.nan
        q1 = pe
        q0 = 1.0 - pe
    return pe


# ---------------------------------------------------------------------------
# PRNG twins (xoshiro256** seeded via splitmix64, as in pidr.numerics)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _mix64(z):
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


@njit(cache=True)
def _derive_seed(seed, k):
    # splitmix64 output number k+1 of the stream started at `seed`
    return _mix64(seed + (k + _U64(1)) * _GAMMA)


@njit(cache=True)
def _seed_state(seed):
    st = seed
    st += _GAMMA
    s0 = _mix64(st)
    st += _GAMMA
    s1 = _mix64(st)
    st += _GAMMA
    s2 = _mix64(st)
    st += _GAMMA
    s3 = _mix64(st)
    return s0, s1, s2, s3


@njit(cache=True)
def _rotl(x, k):
    return (x << k) | (x >> (_U64(64) - k))


@njit(cache=True)
def _next_u64(s0, s1, s2, s3):
    result = _rotl(s1 * _U64(5), _U64(7)) * _U64(9)
    t = s1 << _U64(17)
    s2 ^= s0
    s3 ^= s1
    s1 ^= s2
    s0 ^= s3
    s2 ^= t
    s3 = _rotl(s3, _U64(45))
    return result, s0, s1, s2, s3


@njit(cache=True)
def _uniform(s0, s1, s2, s3):
    u, s0, s1, s2, s3 = _next_u64(s0, s1, s2, s3)
    return (u >> _U64(11)) * 2.0 ** -53, s0, s1, s2, s3


@njit(cache=True)
def _poisson(mu, s0, s1, s2, s3):
    """One Poisson draw: CDF inversion below mean 10, PTRS rejection above."""
    if mu <= 0.0:
        return 0, s0, s1, s2, s3
    if mu < 10.0:
        u, s0, s1, s2, s3 = _uniform(s0, s1, s2, s3)
        p = math.exp(-mu)
        cdf = p
        k = 0
        while u > cdf and k < 1100:
            k += 1
            p *= mu / k
            cdf += p
        return k, s0, s1, s2, s3
    b = 0.931 + 2.53 * math.sqrt(mu)
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    log_mu = math.log(mu)
    while True:
        u, s0, s1, s2, s3 = _uniform(s0, s1, s2, s3)
        u -= 0.5
        v, s0, s1, s2, s3 = _uniform(s0, s1, s2, s3)
        us = 0.5 - abs(u)
        if us <= 0.0:  # u drew exactly -0.5; redraw
            continue
        k = int(math.floor((2.0 * a / us + b) * u + mu + 0.43))
        if us >= 0.07 and v <= v_r:
            return k, s0, s1, s2, s3
        if k < 0 or (us < 0.013 and v > us):
            continue
        if v <= 0.0:
            continue
        if math.log(v * inv_alpha / (a / (us * us) + b)) <= (
            -mu + k * log_mu - math.lgamma(k + 1.0)
        ):
            return k, s0, s1, s2, s3


# ---------------------------------------------------------------------------
# Monte Carlo trial loops
# ---------------------------------------------------------------------------


@njit(cache=True)
def _mc_errors(key, trials, p1, mu_match, mu_mismatch, noop, flip):
    """Count wrong final decisions over `trials` independent trials.

    Trial t draws from the substream _derive_seed(key, t): one uniform for
    the true bit, then one Poisson count per measuring stage.  A click
    (k >= 1) flips the tentative decision, which starts at H0.
    """
    n_stages = mu_match.shape[0]
    errors = 0
    for t in range(trials):
        s0, s1, s2, s3 = _seed_state(_derive_seed(key, _U64(t)))
        u, s0, s1, s2, s3 = _uniform(s0, s1, s2, s3)
        truth = 1 if u < p1 else 0
        if flip:
            truth = 1 - truth
        tent = 0
        for i in range(n_stages):
            if noop[i] == 1:
                continue
            mu = mu_match[i] if truth == tent else mu_mismatch[i]
            k, s0, s1, s2, s3 = _poisson(mu, s0, s1, s2, s3)
            if k >= 1:
                tent = 1 - tent
        if tent != truth:
            errors += 1
    return errors


@njit(cache=True)
def _mc_trace(key, trials, p1, mu_match, mu_mismatch, noop, flip,
              truth_out, counts_out, tent_out):
    """Same draw sequence as _mc_errors, recording per-stage counts and the
    tentative decision after every stage."""
    n_stages = mu_match.shape[0]
    errors = 0
    for t in range(trials):
        s0, s1, s2, s3 = _seed_state(_derive_seed(key, _U64(t)))
        u, s0, s1, s2, s3 = _uniform(s0, s1, s2, s3)
        truth = 1 if u < p1 else 0
        if flip:
            truth = 1 - truth
        truth_out[t] = truth
        tent = 0
        for i in range(n_stages):
            if noop[i] == 1:
                counts_out[t, i] = 0
                tent_out[t, i] = tent
                continue
            mu = mu_match[i] if truth == tent else mu_mismatch[i]
            k, s0, s1, s2, s3 = _poisson(mu, s0, s1, s2, s3)
            counts_out[t, i] = k
            if k >= 1:
                tent = 1 - tent
            tent_out[t, i] = tent
        if tent != truth:
            errors += 1
    return errors


@njit(cache=True)
def _rng_probe(seed, n, out):
    """First n raw draws of the compiled generator (test hook)."""
    s0, s1, s2, s3 = _seed_state(seed)
    for i in range(n):
        u, s0, s1, s2, s3 = _next_u64(s0, s1, s2, s3)
        out[i] = u
