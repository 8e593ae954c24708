from collections import OrderedDict

import numpy as np
import pytest

from pqga.gateset import GateSet, H, T, X, standard_universal_set

_ACCEPTANCE = OrderedDict()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        label = marker.args[0]
        ok, dur = _ACCEPTANCE.get(label, (True, 0.0))
        _ACCEPTANCE[label] = (ok and rep.passed, dur + rep.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, (ok, dur) in sorted(_ACCEPTANCE.items()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  ({dur:.2f}s)")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def std1():
    return standard_universal_set(1)


@pytest.fixture(scope="session")
def std2():
    return standard_universal_set(2)


@pytest.fixture(scope="session")
def ixh():
    """{I, X, H}: X at index 1, H at index 2."""
    return GateSet(1, (np.eye(2), X, H), ("I", "X", "H"))


@pytest.fixture(scope="session")
def iht():
    return GateSet(1, (np.eye(2), H, T), ("I", "H", "T"))

