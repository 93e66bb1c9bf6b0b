import sys
from pathlib import Path

import pytest

from pulleyopt.fixtures import IMP_PARAMS, imp_layout, standard_gait

sys.path.insert(0, str(Path(__file__).parent))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        status, detail = results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {detail}")


@pytest.fixture(scope="session")
def gait():
    return standard_gait()


@pytest.fixture(scope="session")
def short_gait():
    # two strides, enough for calibration and cost checks
    return standard_gait(duration=2.4)


@pytest.fixture(scope="session")
def imp():
    return imp_layout()


@pytest.fixture(scope="session")
def imp_params():
    return IMP_PARAMS
