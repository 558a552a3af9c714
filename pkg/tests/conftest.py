"""Shared fixtures plus a terminal summary for the acceptance criteria.

Every test named ``test_criterion_<n>_*`` in test_acceptance.py feeds one
PASS/FAIL line printed after the run, so the acceptance gate is readable at
a glance even inside a long pytest report.
"""

from __future__ import annotations

import re
from pathlib import Path

import pytest

from conncalc import parse_scenario

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"

CRITERIA = {
    1: "office fixture exactness",
    2: "confusion fixture exactness",
    3: "law-closure property",
    4: "ablation properties",
    5: "replacement property",
    6: "metric properties",
    7: "round-trip canonical form",
    8: "unscoped deltas covered by 4-5",
    9: "CLI contract and DOT export",
}

_CRITERION_RE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")


@pytest.fixture(scope="session")
def office_path() -> Path:
    return FIXTURES / "office_v1.json"


@pytest.fixture(scope="session")
def confusion_path() -> Path:
    return FIXTURES / "confusion_v1.json"


def _load(path: Path):
    result = parse_scenario(path.read_text(encoding="utf-8"))
    assert result.ok, [str(d) for d in result.diagnostics]
    return result.scenario


@pytest.fixture(scope="session")
def office(office_path):
    return _load(office_path)


@pytest.fixture(scope="session")
def confusion(confusion_path):
    return _load(confusion_path)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes: dict[int, bool] = {}
    for status, reports in terminalreporter.stats.items():
        if status not in ("passed", "failed", "error"):
            continue
        for report in reports:
            match = _CRITERION_RE.search(getattr(report, "nodeid", ""))
            if match is None:
                continue
            number = int(match.group(1))
            outcomes[number] = outcomes.get(number, True) and status == "passed"
    if not outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for number, label in sorted(CRITERIA.items()):
        if number in outcomes:
            verdict = "PASS" if outcomes[number] else "FAIL"
        else:
            verdict = "NOT RUN"
        terminalreporter.write_line(f"criterion {number} ({label}): {verdict}")
