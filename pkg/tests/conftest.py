import sys

import pytest

from ofm.order import validate_poset
from ofm.topology import validate_topology


@pytest.fixture
def ch2():
    return validate_poset(["bot", "top"], [("bot", "top")])


@pytest.fixture
def diamond():
    return validate_poset(
        ["bot", "a", "b", "top"],
        [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
    )


@pytest.fixture
def antichain():
    return validate_poset(["a", "b"], [])


@pytest.fixture
def singleton():
    return validate_poset(["p"], [])


@pytest.fixture
def sier():
    return validate_topology(["0", "1"], [[], ["1"], ["0", "1"]])


@pytest.fixture
def pt():
    return validate_topology(["p"], [[], ["p"]])


@pytest.fixture
def disc2():
    return validate_topology(["a", "b"], [[], ["a"], ["b"], ["a", "b"]])


@pytest.fixture
def indiscrete2():
    return validate_topology(["a", "b"], [[], ["a", "b"]])


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance.RESULTS.values():
        terminalreporter.write_line(line)
