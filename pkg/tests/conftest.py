import dataclasses

import pytest

from irslab.harness.cli import preset_path
from irslab.harness.config import parse_scenario

_VERDICTS: list[str] = []


def preset(exp_id: str, **changes):
    sc = parse_scenario(preset_path(exp_id))
    return dataclasses.replace(sc, **changes) if changes else sc


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion and return the flag."""

    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        print(line)
        _VERDICTS.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_VERDICTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
