import pytest

from factdom import primes_upto


@pytest.fixture(scope="session")
def ctx1k():
    return primes_upto(1000)


@pytest.fixture(scope="session")
def ctx10k():
    return primes_upto(10**4)
