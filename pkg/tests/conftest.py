import pytest

from necq.quiver import a2_quiver, jordan_quiver
from necq.traces import TraceContext


@pytest.fixture(scope="session")
def jordan():
    return jordan_quiver().double()


@pytest.fixture(scope="session")
def a2():
    return a2_quiver().double()


@pytest.fixture(scope="session")
def jordan2(jordan):
    """Jordan quiver at dimension 2, shared so trace memos accumulate."""
    return TraceContext(jordan, {"v": 2})


@pytest.fixture(scope="session")
def a2_11(a2):
    return TraceContext(a2, {"v1": 1, "v2": 1})
