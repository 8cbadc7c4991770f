import pytest

from elliptic_dedekind import QuadOrder, SumContext


@pytest.fixture(scope="session")
def order_m8():
    return QuadOrder(-8)


@pytest.fixture(scope="session")
def order_m7():
    return QuadOrder(-7)


@pytest.fixture(scope="session")
def order_gauss():
    return QuadOrder(-4)


@pytest.fixture(scope="session")
def order_eisenstein():
    return QuadOrder(-3)


@pytest.fixture(scope="session")
def ctx_m8(order_m8):
    return SumContext(order_m8)


@pytest.fixture(scope="session")
def ctx_gauss(order_gauss):
    return SumContext(order_gauss)


@pytest.fixture(scope="session")
def ctx_eisenstein(order_eisenstein):
    return SumContext(order_eisenstein)
