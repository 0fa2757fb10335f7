from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], max_examples=60
)
settings.load_profile("default")


def valid_grid_shapes(limit: int):
    """All (N, D0) with D0 dividing N and N <= limit."""
    return [(n, d) for n in range(1, limit + 1) for d in range(1, n + 1) if n % d == 0]


@pytest.fixture
def fig_readings():
    vals = [12, 5, 9, 3, 7, 14, 30, 2, 11, 8, 6, 13, 4, 10, 1, 15]
    return {i: Fraction(v) for i, v in enumerate(vals)}


ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
