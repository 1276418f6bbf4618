import sys

import pytest
from hypothesis import HealthCheck, settings

from leastaction.action import default_window
from leastaction.spacetime import build_1d_solution, build_glued_solution
from leastaction.subsolution import paper_fixture

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", deadline=None, max_examples=1000,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def fx():
    return paper_fixture()


@pytest.fixture(scope="session")
def glued(fx):
    return build_glued_solution(fx.data, fx.sub, 0.5, 1.0)


@pytest.fixture(scope="session")
def oned(fx):
    return build_1d_solution(fx.data, 1.0)


@pytest.fixture(scope="session")
def window(glued, oned):
    return default_window([glued, oned], 1.0)



def pytest_terminal_summary(terminalreporter):
    mod = next((m for name, m in list(sys.modules.items()) if name.endswith("test_acceptance")), None)
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
