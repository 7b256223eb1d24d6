import pytest

from backedge.constructions import c3, pi
from backedge.gadgets import r5
from backedge.solvers import min_order_with_omega


@pytest.fixture(scope="session")
def surrogate():
    """Smallest tournament with ordering clique number 3 (7 vertices)."""
    result = min_order_with_omega(3, 7)
    assert result is not None
    return result.witness


@pytest.fixture(scope="session")
def d2():
    """The 63-vertex second member of the recursive family, with layout."""
    return pi(c3())


@pytest.fixture(scope="session")
def triangle():
    return c3()


@pytest.fixture(scope="session")
def circulant5():
    return r5()
