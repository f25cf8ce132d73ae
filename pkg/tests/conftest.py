from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

GOLDEN = Path(__file__).parent / "golden"

# criterion id -> (passed, detail), filled by the acceptance tests
_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN


@pytest.fixture
def acceptance():
    """Record one acceptance line; the outcome is stored before the assertion runs."""

    def record(number: int, passed: bool, detail: str) -> bool:
        _ACCEPTANCE[number] = (bool(passed), detail)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
