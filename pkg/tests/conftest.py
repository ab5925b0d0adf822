import pytest

from .scenarios import user89_network, user242_network

_ACCEPTANCE = {}


@pytest.fixture(scope="session")
def net89():
    return user89_network()


@pytest.fixture(scope="session")
def net242():
    return user242_network()


@pytest.fixture(scope="session")
def net242_fixed():
    return user242_network(repaired=True)


def pytest_runtest_logreport(report):
    marker = getattr(report, "acceptance", None)
    if marker is None:
        return
    if report.when == "call" or report.outcome != "passed":
        # several tests may share one criterion; any failure sticks
        if _ACCEPTANCE.get(marker, "passed") == "passed":
            _ACCEPTANCE[marker] = report.outcome


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is not None:
        report.acceptance = (mark.args[0], mark.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for (cid, title), outcome in sorted(_ACCEPTANCE.items()):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] {cid}: {title}")
