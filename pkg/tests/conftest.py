from __future__ import annotations

import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"

sys.path.insert(0, str(HERE))

from helpers import dc_graph, marc_graph  # noqa: E402


@pytest.fixture
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def stevenson_graph():
    return marc_graph("stevenson.xml")


@pytest.fixture(scope="session")
def spanish_graph():
    return marc_graph("spanish.xml")


@pytest.fixture(scope="session")
def boslit_graph():
    return marc_graph("boslit.xml")


@pytest.fixture(scope="session")
def marc10_graph():
    return marc_graph("marc10.xml")


@pytest.fixture(scope="session")
def films_graph():
    return dc_graph("films.xml")


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
