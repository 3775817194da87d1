import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def rng():
    return random.Random(20240731)


@pytest.fixture(scope="session")
def knots():
    from swalex.presentations import builtin_knots

    return builtin_knots()


@pytest.fixture(scope="session")
def t3():
    from swalex.presentations import t3_presentation

    return t3_presentation()
