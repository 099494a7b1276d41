"""Shared pytest glue.

The acceptance module records one line per criterion; echo them in the
terminal summary so a plain `pytest -v` run shows the pass/fail table.
"""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "CRITERION_LINES", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
