"""Shared fixtures: the acceptance suite runs once per session and reports one line per criterion."""
import pytest

from matconvex.verify import suite_checks

ACCEPTANCE_SEED = 1
_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def acceptance_checks():
    return suite_checks("all", seed=ACCEPTANCE_SEED)


@pytest.fixture
def record_criterion():
    def record(criterion: int, line: str) -> None:
        _LINES[criterion] = line
    return record


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_LINES):
        terminalreporter.write_line(_LINES[k])
