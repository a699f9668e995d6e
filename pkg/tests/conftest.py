"""Collects acceptance-criterion outcomes and prints one PASS/FAIL line each."""
import re

_CRITERION = re.compile(r"test_c(\d+)_(\w+)")
_results: dict[str, tuple[int, str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    num, name = int(m.group(1)), m.group(2)
    key = f"C{num}"
    if report.when == "call" or report.failed:
        status = "PASS" if report.passed else "FAIL"
        prev = _results.get(key)
        if prev is None or status == "FAIL":
            _results[key] = (num, name, status)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key, (num, name, status) in sorted(_results.items(), key=lambda kv: kv[1][0]):
        terminalreporter.write_line(f"{status} {key} {name.replace('_', ' ')}")
