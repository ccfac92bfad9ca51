import pytest

_results: dict[str, list[tuple[str, str, str]]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title = marker.args
        _results.setdefault(number, []).append((item.name, report.outcome, title))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results, key=lambda n: (int(n.rstrip("abcdefgh")), n)):
        entries = _results[number]
        status = "PASS" if all(o == "passed" for _, o, _ in entries) else "FAIL"
        title = entries[0][2]
        failed = [name for name, o, _ in entries if o != "passed"]
        suffix = f"  (failing: {', '.join(failed)})" if failed else ""
        terminalreporter.write_line(f"criterion {number}: {status}  {title}{suffix}")
