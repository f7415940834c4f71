import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("stress", parent=settings.get_profile("default"), max_examples=600)
settings.load_profile("default")


@pytest.fixture
def three_cols():
    """Columns (1,0), (0,1), (2,2): mean (1,1), ‖μ‖² = 2."""
    return np.array([[1.0, 0.0, 2.0], [0.0, 1.0, 2.0]])


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
