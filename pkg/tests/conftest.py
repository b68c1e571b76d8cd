import math

import numpy as np
import pytest

SQRT2 = math.sqrt(2.0)

# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def assert_sharp_inequality(d: float, h: float, tol: float = 1e-6) -> None:
    """Every probability measure in the suite must satisfy D <= sqrt(2) sqrt(H)."""
    assert d <= SQRT2 * math.sqrt(max(h, 0.0)) + tol, (
        f"sharp inequality violated: D={d}, sqrt(2 H)={SQRT2 * math.sqrt(max(h, 0.0))}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def rng_session():
    return np.random.default_rng(987654321)
