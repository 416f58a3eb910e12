import pytest

from fuchsian.boundary import build_domain, solve
from fuchsian.surface import build_regular_surface

EXAMPLE_WORD = "PPPPQPQQPPQQ"


@pytest.fixture(scope="session")
def genus2():
    return build_regular_surface(2)


@pytest.fixture(scope="session")
def genus3():
    return build_regular_surface(3)


@pytest.fixture(scope="session")
def genus4():
    return build_regular_surface(4)


@pytest.fixture(scope="session")
def solved_example(genus2):
    return solve(genus2, EXAMPLE_WORD)


@pytest.fixture(scope="session")
def domain_example(solved_example):
    return build_domain(solved_example)


@pytest.fixture(scope="session")
def solved_all_p(genus2):
    return solve(genus2, "P" * 12)


@pytest.fixture(scope="session")
def solved_all_q(genus2):
    return solve(genus2, "Q" * 12)
