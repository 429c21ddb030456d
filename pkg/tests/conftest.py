import pytest

from lyd.algebra import catalog


@pytest.fixture(scope="session")
def algebras():
    return catalog()


@pytest.fixture(scope="session")
def small_algebras(algebras):
    return {k: L for k, L in algebras.items() if L.dim <= 3}
