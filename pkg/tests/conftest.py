import numpy as np
import pytest

from snakelemma import Algebra, from_jordan

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def alg3():
    return Algebra.of(2, 3)


@pytest.fixture
def SNR(alg3):
    return tuple(from_jordan(alg3, (a,)) for a in (1, 2, 3))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, msg = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {msg}")
