import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion covered by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key = (marker.args[0], item.name)
    failed = rep.failed or (rep.when == "call" and not rep.passed)
    if failed or key not in _results:
        if failed or rep.when == "call":
            _results[key] = ("FAIL" if failed else "PASS", marker.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for (number, name), (status, label) in sorted(_results.items()):
        terminalreporter.write_line(f"{status}  criterion {number:>2}  {label}  [{name}]")
