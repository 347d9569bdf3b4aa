import sys
from pathlib import Path

import pytest

from clusteralg import Seed

sys.path.insert(0, str(Path(__file__).parent))

SEEDS_DIR = Path(__file__).resolve().parent.parent / "seeds"

_criteria: list[tuple[str, bool, str]] = []


@pytest.fixture
def a2():
    return Seed.initial(["x1", "x2"], [[0, -1], [1, 0]])


@pytest.fixture
def a3():
    return Seed.initial(["x1", "x2", "x3"], [[0, 1, 0], [-1, 0, 1], [0, -1, 0]])


@pytest.fixture
def kronecker():
    return Seed.initial(["x1", "x2"], [[0, 2], [-2, 0]])


@pytest.fixture
def criterion():
    """Record one acceptance line; the terminal summary prints all of them."""

    def record(name: str, ok: bool, detail: str = "") -> None:
        _criteria.append((name, ok, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _criteria:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}".rstrip())
