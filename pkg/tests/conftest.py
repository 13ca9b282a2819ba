"""Collects acceptance-criterion outcomes and prints one line per criterion."""

import pytest

_RESULTS: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion this test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" and not report.failed:
        return
    for mark in item.iter_markers("criterion"):
        number, title = mark.args
        entry = _RESULTS.setdefault(number, {"title": title, "ok": True, "notes": []})
        if report.failed or hasattr(report, "wasxfail"):
            entry["ok"] = False
            entry["notes"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        entry = _RESULTS[number]
        status = "PASS" if entry["ok"] else "FAIL"
        line = f"criterion {number:2d}: {status}  {entry['title']}"
        if entry["notes"]:
            line += f"  (failing: {', '.join(entry['notes'])})"
        terminalreporter.write_line(line)
