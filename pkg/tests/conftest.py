import pytest

from ramasum import Tables, build_table


@pytest.fixture(scope="session")
def tables():
    """Shared spf/mobius/phi bundle, big enough for every unit test."""
    return Tables.build(4096)


@pytest.fixture(scope="session")
def tables_16k():
    """Bundle covering truncations up to 2^14."""
    return Tables.build(1 << 14)


@pytest.fixture(scope="session")
def mobius_1m():
    return build_table("mobius", limit=10**6)


@pytest.fixture(scope="session")
def phi_1m():
    return build_table("phi", limit=10**6)
