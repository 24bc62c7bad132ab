import pytest

from zhukit.fields import QQ, parse_field


@pytest.fixture(scope="session")
def F5():
    return parse_field("F5")


@pytest.fixture(scope="session")
def F7():
    return parse_field("F7")


@pytest.fixture(scope="session")
def F25():
    return parse_field("F5[t]/(t^2-2)")


@pytest.fixture(scope="session")
def QI():
    return parse_field("Q[t]/(t^2+1)")


@pytest.fixture(scope="session")
def Q():
    return QQ


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.summary_lines():
            terminalreporter.write_line(line)
