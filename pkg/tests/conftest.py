import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, passed, summary)``."""
    def record(number, passed, summary):
        CRITERIA.append((number, bool(passed), summary))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, summary in sorted(CRITERIA, key=lambda r: (int(str(r[0]).rstrip("abcdefghij")), str(r[0]))):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {summary}")
