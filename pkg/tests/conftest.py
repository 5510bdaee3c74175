from functools import lru_cache

import pytest

from harmcp2.algebra import Vec3
from harmcp2.curves import make_curve
from harmcp2.grid import build_grid


@lru_cache(maxsize=None)
def grid(N):
    return build_grid(N)


@pytest.fixture(scope="session")
def veronese():
    return make_curve(Vec3.uni([1], [0, 1], [0, 0, 1]))


@pytest.fixture(scope="session")
def cubic():
    return make_curve(Vec3.uni([1], [0, 1], [0, 0, 0, 1]))


@pytest.fixture(scope="session")
def line():
    return make_curve(Vec3.uni([1], [0, 1], [0]))


ACCEPTANCE_LINES: list[str] = []


def acceptance_line(number: int, title: str, passed: bool, detail: str) -> str:
    line = f"criterion {number:2d} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
