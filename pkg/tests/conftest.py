import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from absolver.kb import instantiate, shipped_kb  # noqa: E402


@pytest.fixture(scope="session")
def euclid_kb():
    return instantiate(shipped_kb("euclidean"))


@pytest.fixture(scope="session")
def hyper_kb():
    return instantiate(shipped_kb("hyperbolic"))


@pytest.fixture(scope="session")
def kbs(euclid_kb, hyper_kb):
    return {"euclidean": euclid_kb, "hyperbolic": hyper_kb}


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
