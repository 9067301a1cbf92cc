import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from tpbasis.numerics import PrecisionConfig

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def cfg():
    return PrecisionConfig(100)


@pytest.fixture
def rng():
    return random.Random(20240601)


def rand_fraction(rng, bound=10**6):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def pytest_terminal_summary(terminalreporter):
    acceptance = __import__("sys").modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
