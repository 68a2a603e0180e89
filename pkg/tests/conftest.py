import json
from pathlib import Path

import pytest

from hrng.crypto import tiny_group

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance_lines: list[str] = []


@pytest.fixture(scope="session")
def vectors():
    return json.loads((FIXTURES / "tiny_group_vectors.json").read_text())


@pytest.fixture(scope="session")
def tiny():
    return tiny_group()


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion, printed in the terminal summary."""

    def report(number: int, label: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {label}"
        if detail:
            line += f" ({detail})"
        _acceptance_lines.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
