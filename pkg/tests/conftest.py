import pytest

from orbmod import fixtures


@pytest.fixture(scope="session")
def ising():
    return fixtures.load("ising")


@pytest.fixture(scope="session")
def fibonacci():
    return fixtures.load("fibonacci")


@pytest.fixture(scope="session")
def holo8():
    return fixtures.load("holomorphic_c8")
