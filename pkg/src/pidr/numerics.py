"""Self-contained numerical kernel.

Special functions, bracketed root finding, 1-D and simplex-constrained
minimization, and a seedable PRNG with Poisson sampling.  Nothing here knows
about receivers; the routines are generic and deterministic.

PRNG algorithm
--------------
``Rng`` is xoshiro256** (Blackman & Vigna), a 64-bit shift/rotate generator.
State is seeded from splitmix64: the four state words are the first four
splitmix64 outputs for the given seed.  Substreams are derived with
``derive_seed(seed, k)``, defined as splitmix64 output number ``k + 1`` of the
stream started at ``seed``, i.e. ``mix64(seed + (k + 1) * GAMMA)``.  The same
constructions are used by the compiled Monte Carlo kernel, so a scalar ``Rng``
and substream lane ``k`` of the simulator produce identical sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BadStart, NegativeMean, NoSignChange

_SQRT_PI = math.sqrt(math.pi)

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

_ERFC_SPLIT = 1.5


def _erf_taylor(x: float) -> float:
    # erf(x) = 2/sqrt(pi) * sum_n (-1)^n x^(2n+1) / (n! (2n+1)); converges
    # quickly for |x| <= _ERFC_SPLIT with mild alternation, summed with fsum.
    x2 = x * x
    term = x
    terms = [x]
    n = 0
    while abs(term) > 1e-20:
        term = -term * x2 * (2 * n + 1) / ((n + 1) * (2 * n + 3))
        terms.append(term)
        n += 1
        if n > 120:
            break
    return 2.0 / _SQRT_PI * math.fsum(terms)


def _erfc_cf(x: float) -> float:
    # Continued fraction sqrt(pi) e^{x^2} erfc(x) = 1/(x+ (1/2)/(x+ 1/(x+
    # (3/2)/(x+ ...)))), evaluated by modified Lentz.  Converges for x > 0;
    # used for x > _ERFC_SPLIT where ~100 terms suffice.
    tiny = 1e-300
    c = 1e300
    d = 1.0 / x
    h = d
    for n in range(1, 500):
        a = 0.5 * n
        d = x + a * d
        if d == 0.0:
            d = tiny
        c = x + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < 1e-17:
            break
    return math.exp(-x * x) / _SQRT_PI * h


def erfc(x: float) -> float:
    """Complementary error function.

    Taylor series of erf below ``x = 1.5``, Lentz continued fraction above;
    negative arguments via the reflection erfc(-x) = 2 - erfc(x).  Relative
    error below 1e-13 for |x| <= 6 (checked against a high-precision oracle).
    """
    if x != x:
        return x
    if x < 0.0:
        return 2.0 - erfc(-x)
    if x <= _ERFC_SPLIT:
        return 1.0 - _erf_taylor(x)
    if x > 26.6:
        return 0.0  # underflows double precision
    return _erfc_cf(x)


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Bracket:
    """Interval [lo, hi] with lo < hi enclosing a sign change."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")


def find_root_monotone(
    f: Callable[[float], float], bracket: Bracket, tol: float
) -> float:
    """Bisection root of a monotone function with a sign change on the bracket.

    Stops when |f(x)| <= tol or the bracket width falls below
    1e-14 * max(1, |x|).  Pure bisection: deterministic and immune to
    derivative pathologies.

    Raises:
        NoSignChange: if f has the same sign at both endpoints.
    """
    lo, hi = bracket.lo, bracket.hi
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0.0) == (fhi > 0.0):
        raise NoSignChange(f"f({lo}) = {flo} and f({hi}) = {fhi} share sign")
    increasing = fhi > 0.0
    mid = 0.5 * (lo + hi)
    for _ in range(1100):  # enough halvings for any finite double bracket
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if abs(fm) <= tol or fm == 0.0:
            return mid
        if (fm > 0.0) == increasing:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-14 * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# 1-D minimization
# ---------------------------------------------------------------------------

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def minimize_1d(
    g: Callable[[float], float], lo: float, hi: float
) -> tuple[float, float]:
    """Global-ish scalar minimization: 65-point grid, then golden section.

    The grid locates the best basin; golden-section refines the bracketing
    cell to width 1e-10.  Returns the best (x, g(x)) seen.  Deterministic.
    """
    if not lo < hi:
        raise ValueError(f"minimize_1d requires lo < hi, got [{lo}, {hi}]")
    xs = np.linspace(lo, hi, 65)
    vals = [g(float(x)) for x in xs]
    i = int(np.argmin(vals))
    best_x, best_v = float(xs[i]), vals[i]
    a = float(xs[max(0, i - 1)])
    b = float(xs[min(len(xs) - 1, i + 1)])
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = g(c)
    fd = g(d)
    while b - a > 1e-10:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = g(d)
    for x, v in ((c, fc), (d, fd)):
        if v < best_v:
            best_x, best_v = x, v
    return best_x, best_v


# ---------------------------------------------------------------------------
# simplex-constrained minimization
# ---------------------------------------------------------------------------


def _softmax_full(z: Sequence[float]) -> list[float]:
    # map dim-1 free coordinates to the open simplex; last logit pinned to 0
    m = max(0.0, max(z)) if z else 0.0
    e = [math.exp(v - m) for v in z]
    e.append(math.exp(-m))
    total = math.fsum(e)
    return [v / total for v in e]


def _nelder_mead(
    fn: Callable[[list[float]], float],
    z0: Sequence[float],
    max_iter: int = 2000,
    ftol: float = 1e-12,
) -> tuple[list[float], float]:
    # standard reflect/expand/contract/shrink with deterministic tie-breaking;
    # plain-list arithmetic (dimensions here are tiny)
    n = len(z0)
    simplex = [list(z0)]
    for j in range(n):
        v = list(z0)
        v[j] += 0.25
        simplex.append(v)
    values = [fn(v) for v in simplex]
    for _ in range(max_iter):
        order = sorted(range(n + 1), key=lambda i: (values[i], i))
        simplex = [simplex[i] for i in order]
        values = [values[i] for i in order]
        if values[-1] - values[0] <= ftol:
            break
        worst = simplex[-1]
        centroid = [
            math.fsum(simplex[i][j] for i in range(n)) / n for j in range(n)
        ]
        xr = [2.0 * c - w for c, w in zip(centroid, worst)]
        fr = fn(xr)
        if fr < values[0]:
            xe = [3.0 * c - 2.0 * w for c, w in zip(centroid, worst)]
            fe = fn(xe)
            if fe < fr:
                simplex[-1], values[-1] = xe, fe
            else:
                simplex[-1], values[-1] = xr, fr
        elif fr < values[-2]:
            simplex[-1], values[-1] = xr, fr
        else:
            if fr < values[-1]:
                xc = [1.5 * c - 0.5 * w for c, w in zip(centroid, worst)]
            else:
                xc = [0.5 * c + 0.5 * w for c, w in zip(centroid, worst)]
            fc = fn(xc)
            if fc < min(fr, values[-1]):
                simplex[-1], values[-1] = xc, fc
            else:
                best = simplex[0]
                for j in range(1, n + 1):
                    simplex[j] = [
                        0.5 * (b + v) for b, v in zip(best, simplex[j])
                    ]
                    values[j] = fn(simplex[j])
    i = min(range(n + 1), key=lambda k: (values[k], k))
    return simplex[i], values[i]


def _check_start(start: Sequence[float], dim: int) -> np.ndarray:
    s = np.asarray(start, dtype=float)
    if s.shape != (dim,):
        raise BadStart(f"start has shape {s.shape}, expected ({dim},)")
    if not np.all(s > 0.0):
        raise BadStart(f"start {s.tolist()} not in open simplex (non-positive entry)")
    if abs(float(s.sum()) - 1.0) > 1e-9:
        raise BadStart(f"start {s.tolist()} not on simplex (sum {s.sum()})")
    return s


def minimize_simplex(
    h: Callable[[Sequence[float]], float],
    dim: int,
    starts: Sequence[Sequence[float]],
    rng: "Rng | None" = None,
    n_random_starts: int = 0,
) -> tuple[np.ndarray, float]:
    """Multistart Nelder-Mead over the open probability simplex.

    The simplex is parametrized by ``dim - 1`` unconstrained coordinates
    mapped through normalized exponentials, so every iterate is interior.
    Each start runs Nelder-Mead until the simplex value spread is <= 1e-12 or
    2000 iterations; the best result over all starts is returned.
    ``n_random_starts`` extra interior starts are drawn from ``rng``
    (flat Dirichlet via normalized exponential deviates), making the result
    deterministic given the rng seed and the explicit starts.

    Raises:
        BadStart: if an explicit start lies outside the open simplex.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if dim == 1:
        point = np.array([1.0])
        return point, h(point)
    all_starts = [_check_start(s, dim) for s in starts]
    if n_random_starts > 0:
        if rng is None:
            raise ValueError("rng required when n_random_starts > 0")
        for _ in range(n_random_starts):
            e = np.array([-math.log(1.0 - rng.uniform()) for _ in range(dim)])
            all_starts.append(e / e.sum())
    if not all_starts:
        raise BadStart("no start points given")
    best_f: list[float] | None = None
    best_v = math.inf
    for s in all_starts:
        last = float(s[-1])
        z0 = [math.log(float(v) / last) for v in s[:-1]]
        z, v = _nelder_mead(lambda zz: h(_softmax_full(zz)), z0)
        if v < best_v:
            best_v = v
            best_f = _softmax_full(z)
    assert best_f is not None
    return np.array(best_f), best_v


# ---------------------------------------------------------------------------
# PRNG
# ---------------------------------------------------------------------------


def _mix64(z: int) -> int:
    # splitmix64 output mix (finalizer)
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, k: int) -> int:
    """Substream key: splitmix64 output number ``k + 1`` of stream ``seed``."""
    return _mix64((seed + (k + 1) * _GAMMA) & _MASK64)


def _rotl(x: int, k: int) -> int:
    return ((x << k) | (x >> (64 - k))) & _MASK64


class Rng:
    """Seedable xoshiro256** generator; same seed gives the same sequence
    on every platform (pure 64-bit integer arithmetic)."""

    __slots__ = ("seed", "_s")

    def __init__(self, seed: int) -> None:
        self.seed = seed & _MASK64
        state = self.seed
        s = []
        for _ in range(4):
            state = (state + _GAMMA) & _MASK64
            s.append(_mix64(state))
        if not any(s):  # cannot happen with splitmix seeding; belt and braces
            s[0] = _GAMMA
        self._s = s

    def next_u64(self) -> int:
        s = self._s
        result = (_rotl((s[1] * 5) & _MASK64, 7) * 9) & _MASK64
        t = (s[1] << 17) & _MASK64
        s[2] ^= s[0]
        s[3] ^= s[1]
        s[1] ^= s[2]
        s[0] ^= s[3]
        s[2] ^= t
        s[3] = _rotl(s[3], 45)
        return result

    def uniform(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def split(self, k: int) -> "Rng":
        """Independent child generator keyed by ``k``; does not advance self."""
        return Rng(derive_seed(self.seed, k))


# ---------------------------------------------------------------------------
# Poisson sampling
# ---------------------------------------------------------------------------

_PTRS_CUTOFF = 10.0


def poisson_sample(mu: float, rng: Rng) -> int:
    """Poisson-distributed integer with mean ``mu``.

    Sequential CDF inversion for ``mu < 10``; the transformed-rejection
    method (Hormann's PTRS) for larger means.  One algorithm branch per draw,
    fully determined by the rng stream.

    Raises:
        NegativeMean: if mu < 0.
    """
    if mu < 0.0 or mu != mu:
        raise NegativeMean(f"Poisson mean must be >= 0, got {mu}")
    if mu == 0.0:
        return 0
    if mu < _PTRS_CUTOFF:
        u = rng.uniform()
        p = math.exp(-mu)
        cdf = p
        k = 0
        while u > cdf and k < 1100:
            k += 1
            p *= mu / k
            cdf += p
        return k
    # PTRS transformed rejection, valid for mu >= 10
    b = 0.931 + 2.53 * math.sqrt(mu)
    a = -0.059 + 0.02483 * b
    inv_alpha = 1.1239 + 1.1328 / (b - 3.4)
    v_r = 0.9277 - 3.6224 / (b - 2.0)
    log_mu = math.log(mu)
    while True:
        u = rng.uniform() - 0.5
        v = rng.uniform()
        us = 0.5 - abs(u)
        if us <= 0.0:  # u drew exactly -0.5; redraw
            continue
        k = int(math.floor((2.0 * a / us + b) * u + mu + 0.43))
        if us >= 0.07 and v <= v_r:
            return k
        if k < 0 or (us < 0.013 and v > us):
            continue
        if v <= 0.0:
            continue
        if math.log(v * inv_alpha / (a / (us * us) + b)) <= (
            -mu + k * log_mu - math.lgamma(k + 1.0)
        ):
            return k
