import numpy as np
import pytest

from capvol import LctSystem, numerics
from capvol.canonical import companion

#: (criterion, passed, detail) lines printed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_LINES:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")


@pytest.fixture
def diag_system():
    return LctSystem(np.diag([-1.0, -2.0]), [1.0, 1.0], name="diag-example")


@pytest.fixture
def double_root_system():
    """Companion pair of (s+1)^2."""
    return LctSystem(companion([2.0, 1.0]), [0.0, 1.0])


@pytest.fixture
def scalar_system():
    return LctSystem([[-3.0]], [2.0])


def companion_system(roots):
    p = numerics.poly_from_roots(roots)
    n = p.size - 1
    b = np.zeros(n)
    b[-1] = 1.0
    return LctSystem(companion(p[1:]), b)
