import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from loguncert.radial import make_grid

settings.register_profile(
    "default", max_examples=40, deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DIMS = (1, 2, 3)


@pytest.fixture(scope="session", params=DIMS, ids=lambda d: f"d{d}")
def grid(request):
    """The working grid: n = 2048 composite Gauss on [0, 12]."""
    return make_grid(request.param, 12.0, 2048)


@pytest.fixture(scope="session")
def grids():
    return {d: make_grid(d, 12.0, 2048) for d in DIMS}


def gaussian(grid, a=0.5):
    """``exp(-a r^2)`` sampled on ``grid``."""
    from loguncert.radial import RadialProfile
    return RadialProfile(grid, np.exp(-a * grid.nodes ** 2), f"gaussian(a={a})")


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: dict = {}


def record_acceptance(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
