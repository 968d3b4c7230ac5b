import pytest
from hypothesis import settings

# fixed example generation so that repeated runs see the same cases
settings.register_profile("deterministic", derandomize=True)
settings.load_profile("deterministic")

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    key = mark.args[0]
    ok = rep.passed or (rep.when != "call" and not rep.failed)
    prev = _criteria.get(key, (mark.args[1], True))
    _criteria[key] = (prev[0], prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_criteria):
        title, ok = _criteria[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {title}")
