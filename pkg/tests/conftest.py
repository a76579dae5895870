import random
import sys

import pytest
from hypothesis import HealthCheck, settings

from troprat import fixtures

settings.register_profile(
    "default", max_examples=60, deadline=None, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ALL = list(fixtures.FIXTURES)
WITH_EDGES = [n for n in ALL if n != "PT"]


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(params=ALL)
def any_curve(request):
    return fixtures.fixture(request.param)


@pytest.fixture(params=WITH_EDGES)
def edged_curve(request):
    return fixtures.fixture(request.param)


def pytest_terminal_summary(terminalreporter, config):
    module = sys.modules.get("test_acceptance")
    if module is None:
        return
    lines = module.summary_lines(config)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
