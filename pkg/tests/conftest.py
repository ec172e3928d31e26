import numpy as np
import pytest

from grushin.grids import GrushinConfig
from grushin.transforms import get_plan


@pytest.fixture(scope="session")
def config():
    return GrushinConfig()


@pytest.fixture(scope="session")
def plan(config):
    return get_plan(config)


@pytest.fixture(scope="session")
def small2p():
    return GrushinConfig(d_prime=2, d_doubleprime=1, N_prime=64, N_doubleprime=64, K=16)


@pytest.fixture(scope="session")
def small2pp():
    return GrushinConfig(d_prime=1, d_doubleprime=2, N_prime=64, N_doubleprime=64, K=16)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
