import pytest
from hypothesis import HealthCheck, settings

from cjtkit import Weight, enumerate_flow_points, kronecker_quiver, kronecker_weight, running_example_quiver

settings.register_profile(
    "cjtkit", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("cjtkit")

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title, limit): acceptance criterion with a wall-clock limit in seconds")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    n, title, limit = marker.args
    _CRITERIA[n] = (title, limit, report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        title, limit, outcome, duration = _CRITERIA[n]
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{mark}] criterion {n:2d}: {title} ({duration:.2f}s, limit {limit}s)")


@pytest.fixture(scope="session")
def running():
    q = running_example_quiver()
    return q, enumerate_flow_points(q, Weight.of(q, {"0": 2, "1": -1, "2": -1}))


@pytest.fixture(scope="session")
def k2():
    q = kronecker_quiver(2)
    return q, enumerate_flow_points(q, kronecker_weight(q))
