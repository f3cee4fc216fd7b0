import random

import pytest

from dtms import fixtures
from dtms.group import GroupParams, HashMode, generate_params

# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def toy():
    """The 47/23/25 group with the fixed challenge."""
    return fixtures.params()


@pytest.fixture
def toy_real():
    """Same group, real hashing."""
    return GroupParams(47, 23, 25, HashMode.real())


@pytest.fixture(scope="session")
def toy16():
    """A 16-bit-q group; small enough to be fast, large enough that 1/q is negligible."""
    return generate_params(16, 40, random.Random(2024))


@pytest.fixture
def deal():
    return fixtures.deal()
