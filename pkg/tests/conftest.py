import subprocess
import sys

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def run_cli():
    def run(*args, **kw):
        return subprocess.run([sys.executable, "-m", "funceq", *map(str, args)],
                              capture_output=True, text=True, check=False, timeout=600, **kw)
    return run


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
