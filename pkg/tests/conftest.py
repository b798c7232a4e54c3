import json
import pathlib

import pytest

GOLDEN = pathlib.Path(__file__).resolve().parent / "golden"

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def golden():
    return json.loads((GOLDEN / "golden_values.json").read_text())


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
