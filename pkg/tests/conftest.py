import pytest

from dimjump.registry import TABLE_ROWS, build_pair, registry_load
from dimjump.sim import teleport_pair


@pytest.fixture(scope="session")
def pairs():
    """(2D, 3D) codes for every table row, built once."""
    return {name: build_pair(registry_load(name)) for name in TABLE_ROWS}


@pytest.fixture(scope="session")
def bt27(pairs):
    return pairs["bt-27"]


@pytest.fixture(scope="session")
def bt27_teleport():
    return teleport_pair("bt-27")


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def verdict():
    """Record a PASS/FAIL line for the terminal summary, then assert."""

    def record(label: str, ok: bool, detail: str = ""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f": {detail}" if detail else "")
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
