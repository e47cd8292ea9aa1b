from pathlib import Path

import pytest

from crn_tdi.parser import load_network

FIXTURES = Path(__file__).resolve().parents[1] / "src" / "crn_tdi" / "fixtures"


def fixture_graph(name):
    return load_network(FIXTURES / name).graph


@pytest.fixture
def graph_A():
    return fixture_graph("birth_death.crn")


@pytest.fixture
def graph_B():
    return fixture_graph("sec6_example.crn")


@pytest.fixture
def graph_C():
    return fixture_graph("circadian_basic.crn")


# one PASS/FAIL line per acceptance criterion, shown at the end of every run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
