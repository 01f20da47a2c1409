"""Shared test plumbing: the acceptance-criterion summary block."""

# collected by tests/test_acceptance.py, printed after the run so the
# verdict lines are visible even though pytest captures stdout
CRITERION_LINES = []


def pytest_terminal_summary(terminalreporter):
    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
