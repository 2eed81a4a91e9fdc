import pytest

_CRITERION_LINES: list[str] = []


@pytest.fixture
def record_criterion():
    """Collect one human-readable line per acceptance criterion for the summary."""

    def _record(line: str):
        _CRITERION_LINES.append(line)

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERION_LINES:
            terminalreporter.write_line(line)
