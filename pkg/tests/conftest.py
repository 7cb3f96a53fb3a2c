import pytest

from support import sparse18, micro4

ACCEPTANCE_LINES = []


@pytest.fixture
def inst4():
    return micro4()


@pytest.fixture
def inst18():
    return sparse18()


@pytest.fixture
def report():
    """Record one acceptance line; printed in the terminal summary."""
    def _report(line):
        ACCEPTANCE_LINES.append(line)
        print(line)
    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
