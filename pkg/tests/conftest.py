import pytest
from hypothesis import HealthCheck, settings

from pidr import (
    IDEAL,
    Partition,
    Priors,
    Rng,
    operating_point_from_nbar,
    simulate_cascade,
    strategy_global,
)

settings.register_profile(
    "pidr",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("pidr")


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Touch every compiled kernel once so JIT time never lands inside a
    timed assertion."""
    op = operating_point_from_nbar(0.5)
    eq = Priors.equal()
    strategy_global(2, op, eq, IDEAL, Rng(0))
    simulate_cascade(Partition((0.5, 0.5)), op, eq, IDEAL, 100, Rng(0))
    yield
