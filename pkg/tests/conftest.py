import numpy as np
import pytest

from mfseries import mfdfa, synth

N14 = 2**14


@pytest.fixture(scope="session")
def default_grid_n14():
    return mfdfa.GridSpec.default(N14, 2)


@pytest.fixture(scope="session")
def cascade():
    return synth.binomial_cascade(N14, 0.6)


@pytest.fixture(scope="session")
def dyadic_grid():
    # the deterministic cascade is log-periodic in s; dyadic scales sample it in phase
    return mfdfa.GridSpec(mfdfa.q_grid(-5, 5, 0.5), 2 ** np.arange(3, 13), 2)


ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line, print it, then fail the test if the check did not hold."""

    def record(number, name, ok, detail=""):
        line = f"criterion {number} [{name}]: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
