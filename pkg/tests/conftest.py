import numpy as np
import pytest

from aperiodic_lti import TransferFunction


@pytest.fixture
def first_order():
    return TransferFunction([1.0], [1.0, 1.0])


@pytest.fixture
def table1_system():
    den = np.polymul(np.polymul([10.0, 1.0], [7.5, 1.0]), [5.0, 1.0])
    return TransferFunction([1.0], den)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, printed after the run
_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    def record(number, passed, detail):
        line = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for k in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[k])
