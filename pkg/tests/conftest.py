import pytest

from topact.catalog import (cyclic, left_zeros, left_zero_split_topology,
                            right_zeros, truncated_addition, trivial_monoid,
                            two_idempotents)


@pytest.fixture
def c2():
    return cyclic(2)


@pytest.fixture
def c4():
    return cyclic(4)


@pytest.fixture
def m_lz():
    return left_zeros()


@pytest.fixture
def m_rz():
    return right_zeros()


@pytest.fixture
def n2():
    return truncated_addition(2)


@pytest.fixture
def b2():
    return two_idempotents()


@pytest.fixture
def one():
    return trivial_monoid()


@pytest.fixture
def tau_a():
    return left_zero_split_topology()
