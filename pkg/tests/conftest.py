import numpy as np
import pytest

from qamem import PatternSet, single_center_query

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def ex1_patterns():
    return PatternSet(3, [2, 4])


@pytest.fixture
def ex1_query():
    return single_center_query(3, 3, 0.25)


@pytest.fixture
def seven_patterns():
    return PatternSet(7, [23, 59, 61, 110])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
