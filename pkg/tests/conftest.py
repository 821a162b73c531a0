import numpy as np
import pytest
from hypothesis import settings

from gcca.data import truncate

settings.register_profile("repo", derandomize=True, deadline=None)
settings.load_profile("repo")


def random_graph(rng, p, q, epsilon=0.1, density=0.6):
    """Continuous random truncated graph (ties have probability zero)."""
    r = rng.uniform(-1, 1, (p, q)) * (rng.random((p, q)) < density)
    return truncate(r, epsilon)


def grid_graph(rng, p, q, epsilon=0.1, levels=4):
    """Graph whose entries are multiples of 1/levels, so means tie often."""
    r = rng.integers(0, levels + 1, (p, q)) / levels
    return truncate(r, epsilon)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, echoed after the run even when output is captured
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
