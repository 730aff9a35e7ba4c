from pathlib import Path

import pytest

from detour.network import load_network
from detour.scenarios import bundled_data_dir

DATA = bundled_data_dir()


@pytest.fixture(scope="session")
def toy():
    return load_network(DATA / "networks" / "net-toy.json")


@pytest.fixture(scope="session")
def nyc():
    return load_network(DATA / "networks" / "nyc.json")


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[n])
