from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

from cycmax import PeriodicTuple

REFERENCE = (1.2, 2.3, 3.5, 1.8, 1.6, 2.4, 3.0, 3.2, 1.1, 2.5)
REFERENCE_EXACT = tuple(
    Fraction(s) for s in ("6/5", "23/10", "7/2", "9/5", "8/5", "12/5", "3", "16/5", "11/10", "5/2")
)


@pytest.fixture
def ref_float() -> PeriodicTuple:
    return PeriodicTuple(list(REFERENCE), backend="float")


@pytest.fixture
def ref_rational() -> PeriodicTuple:
    return PeriodicTuple(list(REFERENCE_EXACT), backend="rational")
