import pytest
from hypothesis import HealthCheck, settings

from kpcohft import kernels

settings.register_profile("default", max_examples=30, deadline=None,
                          suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("default")


@pytest.fixture(params=sorted(kernels.backends()))
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    monkeypatch.setattr(kernels, "_impl", kernels.backends()[request.param])
    return request.param


_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, bound): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title, bound = mark.args
    _criteria[number] = (title, rep.passed, rep.duration, bound)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok, took, bound = _criteria[number]
        terminalreporter.write_line("criterion %d %-40s %s  %.2fs (bound %gs)"
                                    % (number, title, "PASS" if ok else "FAIL", took, bound))
