import math

import pytest

from posrate.config import default_model


@pytest.fixture
def model():
    return default_model()


@pytest.fixture
def high_power():
    """Sparse high-power network: 1/km, 25 dBm."""
    return default_model(lambda_km=1.0, p_dbm=25.0)


def rel(a, b):
    return abs(a - b) / abs(b) if b else abs(a - b)


deg = math.radians


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
