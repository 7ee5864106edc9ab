import pytest
from hypothesis import settings

from tnnflag.rootdata import RootDatum

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def A1():
    return RootDatum.of_type("A1")


@pytest.fixture(scope="session")
def A2():
    return RootDatum.of_type("A2")


@pytest.fixture(scope="session")
def A3():
    return RootDatum.of_type("A3")


@pytest.fixture(scope="session")
def C2():
    return RootDatum.of_type("C2")


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
