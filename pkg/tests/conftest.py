from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import pytest

from commitplan.pddl_io import read_json_task

FIXTURES = Path(__file__).parent / "fixtures"

_criteria: dict[int, str] = {}
_results: dict[int, list[bool]] = defaultdict(list)
_notes: dict[int, list[str]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion this test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            _criteria[m.args[0]] = m.args[1]


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    n = report.user_properties and dict(report.user_properties).get("criterion")
    if n:
        _results[n].append(report.passed)


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    m = item.get_closest_marker("criterion")
    if m:
        item.user_properties.append(("criterion", m.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        outcomes = _results.get(n)
        if not outcomes:
            status = "NOT RUN"
        else:
            status = "PASS" if all(outcomes) else "FAIL"
        terminalreporter.write_line(f"AC{n} {status}: {_criteria[n]}")
        for note in _notes.get(n, ()):
            terminalreporter.write_line(f"    {note}")


@pytest.fixture(scope="session")
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def worked():
    return read_json_task((FIXTURES / "worked_example.json").read_text())


@pytest.fixture
def note(request):
    """Attach a line of detail to the summary of the test's acceptance criterion."""
    m = request.node.get_closest_marker("criterion")

    def add(text: str) -> None:
        _notes[m.args[0] if m else 0].append(text)

    return add
