"""Collects acceptance outcomes and prints one PASS/FAIL line per criterion."""
from collections import OrderedDict

import pytest

_results: "OrderedDict[int, dict]" = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when != "call" and not rep.failed and not rep.skipped:
        return
    number, title = mark.args
    entry = _results.setdefault(number, {"title": title, "ok": True, "notes": []})
    if hasattr(rep, "wasxfail"):
        entry["notes"].append(f"expected failure: {rep.wasxfail}")
    elif rep.failed:
        entry["ok"] = False
        entry["notes"].append(f"{item.name} failed")
    elif rep.skipped:
        entry["ok"] = False
        entry["notes"].append(f"{item.name} skipped")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        e = _results[number]
        status = "PASS" if e["ok"] else "FAIL"
        note = f"  ({'; '.join(e['notes'])})" if e["notes"] else ""
        terminalreporter.write_line(f"criterion {number:2d} {status}  {e['title']}{note}")
