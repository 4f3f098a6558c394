import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("repro", derandomize=True, deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repro"))


@pytest.fixture(scope="session")
def sl32():
    from wagoner.rootdata import instantiate
    return instantiate("SL", 3, 2)


@pytest.fixture(scope="session")
def sl33():
    from wagoner.rootdata import instantiate
    return instantiate("SL", 3, 3)


@pytest.fixture(scope="session")
def sp42():
    from wagoner.rootdata import instantiate
    return instantiate("Sp4", 4, 2)


@pytest.fixture(scope="session")
def w_sl32(sl32):
    from wagoner.complexes import build_wagoner
    return build_wagoner(sl32)


@pytest.fixture(scope="session")
def a2():
    from wagoner.coxeter import CoxeterSystem
    return CoxeterSystem([[1, 3], [3, 1]])


@pytest.fixture(scope="session")
def a3():
    from wagoner.coxeter import CoxeterSystem
    return CoxeterSystem([[1, 3, 2], [3, 1, 3], [2, 3, 1]])


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for k in sorted(lines):
            terminalreporter.write_line(lines[k])
