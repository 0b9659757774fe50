"""Per-criterion pass/fail summary for the acceptance suite.

Tests tagged ``@pytest.mark.criterion(n, "title")`` are grouped by ``n``; a
criterion passes when every test tagged with it passed.
"""

from collections import OrderedDict


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")
    config._criteria = OrderedDict()


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call" and not (call.when == "setup" and call.excinfo):
        return
    number, title = marker.args
    entry = item.config._criteria.setdefault(number, {"title": title, "passed": 0, "failed": []})
    if call.excinfo is None:
        entry["passed"] += 1
    else:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    criteria = config._criteria
    if not criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(criteria):
        entry = criteria[number]
        status = "FAIL" if entry["failed"] else "PASS"
        line = f"{status} criterion {number}: {entry['title']} ({entry['passed']} checks passed"
        if entry["failed"]:
            line += f", failed: {', '.join(entry['failed'])}"
        terminalreporter.write_line(line + ")")
