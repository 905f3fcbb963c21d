"""Shared fixtures and the per-criterion acceptance report."""
import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion id")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    entry = _results.setdefault(number, [title, True, False])
    if report.failed:
        entry[1] = False
    if report.when == "call":
        entry[2] = True


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        title, ok, ran = _results[number]
        status = "PASS" if ok and ran else ("FAIL" if not ok else "SKIP")
        terminalreporter.write_line(f"criterion {number:>2}: {status}  {title}")
