import numpy as np
import pytest

from sdrating import GameRecord, WinLoss


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture
def three_game_log():
    return [
        GameRecord(1, WinLoss("A", "B")),
        GameRecord(2, WinLoss("C", "A")),
        GameRecord(5, WinLoss("A", "B")),
    ]


# -- acceptance reporting ----------------------------------------------------
# Tests marked ``@pytest.mark.acceptance(n, name)`` get one PASS/FAIL line in
# the terminal summary; details come from ``record_property("detail", ...)``.

_ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or not marker.args:
        return
    if report.when == "call" or (report.when == "setup" and not report.passed):
        number, name = marker.args
        detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
        if report.failed and not detail:
            detail = call.excinfo.typename if call.excinfo else "error"
        item.config.stash[_ACCEPTANCE][number] = (name, report.passed, detail)


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_ACCEPTANCE, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        name, passed, detail = results[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  criterion {number:>2}  {name}: {detail}")
