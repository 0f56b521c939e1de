import pytest

from autoquant.scenarios import load_scenario

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def driving():
    return load_scenario("driving-table4").document


@pytest.fixture(scope="session")
def subt():
    return load_scenario("subt-table5").document


@pytest.fixture(scope="session")
def vehicle_a(driving):
    return driving.system("A")


@pytest.fixture(scope="session")
def vehicle_b(driving):
    return driving.system("B")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
