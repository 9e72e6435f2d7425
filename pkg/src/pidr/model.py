"""Value types shared by all modules.

All types are frozen dataclasses validated at construction.  Amplitudes are
real and non-negative: the binary phase is absorbed into the hypothesis
labels (H0 carries -alpha, H1 carries +alpha).

Model conventions worth knowing before trusting numbers:

* Segment energy fraction equals time fraction (constant-intensity local
  field), so ``|alpha_i|^2 = f_i * |alpha|^2`` and optimizing fractions is
  the same as optimizing segment durations.
* The dark-count mean ``nu`` is charged once per segment measurement and is
  NOT scaled by segment duration.  Physically dark counts accumulate with
  time; this model applies the same ``nu`` to every segment regardless of
  its length.  Keep that in mind when reading many-segment results.
"""

from __future__ import annotations

from dataclasses import dataclass

import math

from .errors import InvalidN, InvariantViolation, NegativeEnergy


@dataclass(frozen=True)
class DeviceParams:
    """Non-ideal device vector: quantum efficiency ``eta``, dark counts per
    segment measurement ``nu``, beam-splitter transmittance ``tau``, and
    mode-match factor ``xi``."""

    eta: float
    nu: float
    tau: float
    xi: float

    def __post_init__(self) -> None:
        if not 0.0 < self.eta <= 1.0:
            raise InvariantViolation(f"eta must be in (0, 1], got {self.eta}")
        if not self.nu >= 0.0:
            raise InvariantViolation(f"nu must be >= 0, got {self.nu}")
        if not 0.0 < self.tau <= 1.0:
            raise InvariantViolation(f"tau must be in (0, 1], got {self.tau}")
        if not 0.0 < self.xi <= 1.0:
            raise InvariantViolation(f"xi must be in (0, 1], got {self.xi}")


#: Lossless, noiseless devices.
IDEAL = DeviceParams(eta=1.0, nu=0.0, tau=1.0, xi=1.0)

#: Realistic devices: eta=0.9, nu=0.001, tau=0.99, xi=0.995.
NONIDEAL = DeviceParams(eta=0.9, nu=0.001, tau=0.99, xi=0.995)

PRESETS: dict[str, DeviceParams] = {"ideal": IDEAL, "nonideal": NONIDEAL}


@dataclass(frozen=True)
class Priors:
    """Hypothesis probabilities (p0 for H0 / signal -alpha, p1 for H1).

    The same type carries the per-stage updated priors inside a cascade.
    """

    p0: float
    p1: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.p0 <= 1.0 and 0.0 <= self.p1 <= 1.0):
            raise InvariantViolation(f"priors must lie in [0,1], got ({self.p0}, {self.p1})")
        if abs(self.p0 + self.p1 - 1.0) > 1e-12:
            raise InvariantViolation(f"priors must sum to 1, got {self.p0 + self.p1}")

    @staticmethod
    def equal() -> "Priors":
        return Priors(0.5, 0.5)

    @staticmethod
    def from_p0(p0: float) -> "Priors":
        return Priors(p0, 1.0 - p0)


@dataclass(frozen=True)
class OperatingPoint:
    """Signal energy: mean photon number ``nbar`` and amplitude ``alpha``."""

    nbar: float
    alpha: float

    def __post_init__(self) -> None:
        if self.nbar < 0.0:
            raise NegativeEnergy(f"nbar must be >= 0, got {self.nbar}")
        if self.alpha < 0.0 or abs(self.alpha * self.alpha - self.nbar) > 1e-12 * max(1.0, self.nbar):
            raise InvariantViolation(f"alpha^2 != nbar: {self.alpha}^2 vs {self.nbar}")


def operating_point_from_nbar(nbar: float) -> OperatingPoint:
    """Operating point with alpha = sqrt(nbar)."""
    if nbar < 0.0 or nbar != nbar:
        raise NegativeEnergy(f"nbar must be >= 0, got {nbar}")
    return OperatingPoint(nbar=nbar, alpha=math.sqrt(nbar))


@dataclass(frozen=True)
class Partition:
    """Ordered segment fractions f_1..f_N with sum 1.

    Order is semantic: stage i measures fraction f_i and the cascade is not
    permutation-invariant.  Zero fractions are allowed; they become no-op
    stages, which embeds every (N-1)-segment receiver in the N-segment
    search space.
    """

    fractions: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.fractions) < 1:
            raise InvariantViolation("partition needs at least one segment")
        if any(f < 0.0 or f != f for f in self.fractions):
            raise InvariantViolation(f"fractions must be >= 0, got {self.fractions}")
        total = math.fsum(self.fractions)
        if abs(total - 1.0) > 1e-10:
            raise InvariantViolation(f"fractions must sum to 1, got {total!r}")

    def __len__(self) -> int:
        return len(self.fractions)


def identical_partition(n: int) -> Partition:
    """Partition into n equal fractions 1/n."""
    if not isinstance(n, int) or n < 1:
        raise InvalidN(f"segment count must be an integer >= 1, got {n}")
    return Partition(tuple([1.0 / n] * n))


@dataclass(frozen=True)
class StageRecord:
    """Per-stage trace: amplitude, priors in effect, solved displacement,
    and the stage error probability.  ``noop`` marks dropped (zero-length)
    segments, whose ``beta_star`` is NaN."""

    index: int
    alpha_i: float
    p0_i: float
    p1_i: float
    beta_star: float
    pe_stage: float
    noop: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.pe_stage <= 1.0:
            raise InvariantViolation(f"stage error {self.pe_stage} outside [0,1]")
        if not self.noop and not math.isfinite(self.beta_star):
            raise InvariantViolation("beta_star must be finite for a measuring stage")


@dataclass(frozen=True)
class CascadeResult:
    """Full cascade trace; ``p_error`` is the final stage's error."""

    stages: tuple[StageRecord, ...]
    p_error: float

    def __post_init__(self) -> None:
        if not self.stages:
            raise InvariantViolation("cascade needs at least one stage")
        if self.p_error != self.stages[-1].pe_stage:
            raise InvariantViolation("p_error must equal the last stage error")
