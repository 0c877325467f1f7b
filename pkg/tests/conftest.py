import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("quick", max_examples=50, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ACCEPTANCE_LINES = []
BUILD_SECONDS = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def model_3cp2_12():
    """The #3CP² model through degree 12, built and certified once per session."""
    import time

    from sullivan.minimal_model import build_minimal_model
    from sullivan.spaces import preset
    t0 = time.perf_counter()
    model = build_minimal_model(preset("3CP2"), 12)
    BUILD_SECONDS["3CP2@12"] = time.perf_counter() - t0
    return model
