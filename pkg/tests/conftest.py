import pytest

from catalankit.constants import G_FLOAT

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Record one acceptance line; the terminal summary prints them all."""

    def _record(label: str, ok: bool, detail: str = "") -> bool:
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else ""))
        return ok

    return _record


@pytest.fixture
def catalan() -> float:
    return G_FLOAT


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
