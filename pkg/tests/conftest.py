import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from iplr import InterlacedRule, PolyLatticeRule, Weights

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


@pytest.fixture
def tiny_rule():
    """b=2, m=2, p=x^2+x+1, q=(1, x), d=2, s=1."""
    return InterlacedRule(2, 1, PolyLatticeRule.from_ints(2, 2, 7, [1, 2]))


@pytest.fixture
def unit_weight():
    return Weights.product([1.0])


def rng(seed=0):
    return np.random.default_rng(seed)
