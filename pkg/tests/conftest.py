import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from orbitlink.scenario import ScenarioConfig

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def scenario():
    return ScenarioConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)



def pytest_terminal_summary(terminalreporter):
    from helpers import ACCEPTANCE_LINES

    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
