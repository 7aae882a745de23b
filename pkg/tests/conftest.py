import pytest

from tame_tors.exact_linalg import QQ
from tame_tors.quiver import A2_tilde, D4_tilde, kronecker, linear_A

ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def kron():
    return kronecker()


@pytest.fixture(scope="session")
def d4t():
    return D4_tilde()


@pytest.fixture(scope="session")
def a2t():
    return A2_tilde()


@pytest.fixture(scope="session")
def a2():
    return linear_A(2)


@pytest.fixture(scope="session")
def qq():
    return QQ


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
