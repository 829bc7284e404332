import os

import pytest

# A fixed seed so failures are reproducible; override with RAREWALK_TEST_SEED.
TEST_SEED = int(os.environ.get("RAREWALK_TEST_SEED", "20240611"))

# one line per acceptance criterion, filled in by test_acceptance.py
CRITERIA_LINES: list[str] = []


@pytest.fixture
def seed():
    return TEST_SEED


def pytest_terminal_summary(terminalreporter):
    if CRITERIA_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
