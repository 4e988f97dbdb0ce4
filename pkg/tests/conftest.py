import pytest

CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the terminal summary prints them all."""

    def record(number, text, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"
        if detail:
            line += f" ({detail})"
        CRITERIA.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
