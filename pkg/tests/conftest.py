import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.dirname(__file__))

ROOT = Path(__file__).resolve().parent.parent
SPECS = ROOT / "specs"

# (criterion, description, passed) lines filled in by test_acceptance.py
ACCEPTANCE: list = []


@pytest.fixture
def specs_dir() -> Path:
    return SPECS


def record_acceptance(criterion: str, description: str, passed: bool):
    line = f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {description}"
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
