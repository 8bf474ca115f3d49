import numpy as np
import pytest

from helpers import make_pair


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def pair555():
    return make_pair(0)


def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
