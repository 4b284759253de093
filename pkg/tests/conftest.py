import os
import sys

import pytest

# lets the tests import the shared mpmath oracles as a plain module
sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(n, ok, detail)``."""

    def record(n, ok, detail):
        line = f"CRITERION {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA.append((n, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_CRITERIA):
        terminalreporter.write_line(line)
