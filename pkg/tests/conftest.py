import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_results = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, text = marker.args
    ok = report.passed or report.skipped
    if report.when == "call" or not ok:
        entry = _results.setdefault(number, {"text": text, "ok": True, "failed": []})
        if not ok:
            entry["ok"] = False
            entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        entry = _results[number]
        status = "PASS" if entry["ok"] else "FAIL"
        line = f"criterion {number}: {status}  {entry['text']}"
        if entry["failed"]:
            line += f"  (failing: {', '.join(entry['failed'])})"
        terminalreporter.write_line(line)
