import math

import pytest
from hypothesis import settings

from vicmor import SystemParams

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def fig3():
    return SystemParams()


@pytest.fixture
def perpendicular():
    return SystemParams(theta=math.pi / 2)


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line per acceptance criterion (printed at the end of the run)."""

    def record(label: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
