import math

import pytest
from hypothesis import HealthCheck, settings

from invform.polyfreq import TransferFunction

settings.register_profile(
    "default", max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# (s + 10) / (s (s^2 + 2 s + 10)), the running example plant
EXAMPLE_PLANT = TransferFunction([10.0, 1.0], [0.0, 10.0, 2.0, 1.0])

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def plant():
    return EXAMPLE_PLANT


def deg(x):
    return math.radians(x)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
