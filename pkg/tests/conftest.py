import re

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")
_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    n, name = int(m.group(1)), m.group(2)
    failed = report.failed or (report.when == "call" and report.outcome != "passed")
    if failed or n not in _results:
        prev = _results.get(n, (None, "PASS"))[1]
        _results[n] = (name, "FAIL" if failed or prev == "FAIL" else "PASS")


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        name, status = _results[n]
        terminalreporter.write_line(f"ACCEPTANCE criterion {n:2d} {name.replace('_', ' ')}: {status}")
