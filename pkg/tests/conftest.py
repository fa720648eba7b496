import numpy as np
import pytest

from sharpfield.dof import DofParams

ACCEPTANCE_LINES = []


@pytest.fixture
def params():
    return DofParams(0.05, 3e-5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
