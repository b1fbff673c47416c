"""Shared pytest hooks: one summary line per acceptance criterion."""

from __future__ import annotations

_CRITERIA: dict[str, tuple[int, str]] = {}
_OUTCOMES: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers",
        "acceptance(number, description): top-level acceptance criterion",
    )


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("acceptance")
        if marker is not None:
            _CRITERIA[item.nodeid] = (marker.args[0], marker.args[1])


def pytest_runtest_logreport(report):
    if report.nodeid in _CRITERIA and report.when == "call":
        _OUTCOMES[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (number, description) in sorted(_CRITERIA.items(), key=lambda kv: kv[1]):
        outcome = _OUTCOMES.get(nodeid, "skipped")
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {status}  {description}")
