import numpy as np
import pytest

from bcft.catalog import fibonacci, ising, su2


@pytest.fixture(scope="session")
def ising_data():
    return ising()


@pytest.fixture(scope="session")
def fib_data():
    return fibonacci()


@pytest.fixture(scope="session")
def su2_4_data():
    return su2(4)


@pytest.fixture(scope="session")
def all_catalogs(ising_data, fib_data, su2_4_data):
    return [ising_data, fib_data, su2(2), su2_4_data]


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
