from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from zetaladder.gram import default_cache
from zetaladder.hardy_littlewood import default_table
from zetaladder.ladder import Backend, LadderContext

settings.register_profile("zl", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("zl")

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def cache():
    return default_cache()


@pytest.fixture(scope="session")
def table(cache):
    return default_table(cache)


@pytest.fixture(scope="session")
def smooth(table):
    return LadderContext(table=table)


@pytest.fixture(scope="session")
def cumulative(table):
    return LadderContext(backend=Backend.CUMULATIVE, table=table)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
