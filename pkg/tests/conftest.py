import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _criteria.setdefault(
        number, {"title": title, "passed": True, "seen": False, "failures": [], "details": []}
    )
    if report.when == "call":
        entry["details"].extend(v for k, v in item.user_properties if k == "detail")
    if report.when == "call" or report.failed:
        entry["seen"] = True
        if report.failed:
            entry["passed"] = False
            entry["failures"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        if not entry["seen"]:
            status = "SKIP"
        else:
            status = "PASS" if entry["passed"] else "FAIL"
        line = f"criterion {number:>2}: {status}  {entry['title']}"
        if entry["failures"]:
            line += f"  [failed: {', '.join(entry['failures'])}]"
        terminalreporter.write_line(line)
        for detail in entry["details"]:
            terminalreporter.write_line(f"              {detail}")
