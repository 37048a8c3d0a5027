import pytest

from mcl import AgentUniverse, load_fixture


@pytest.fixture(scope="session")
def ab():
    return AgentUniverse.of("a", "b")


@pytest.fixture(scope="session")
def solo():
    return AgentUniverse.of("a")


@pytest.fixture(scope="session")
def one_mask():
    return load_fixture("one_mask")


@pytest.fixture(scope="session")
def two_masks():
    return load_fixture("two_masks")
