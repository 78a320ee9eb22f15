import pytest
from hypothesis import settings

from sandpile_lab.graph_core import example_graph
from sandpile_lab.oracles import graph_family

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def g7():
    return example_graph()


@pytest.fixture(scope="session")
def small_family():
    """Connected graphs with at most four non-sink vertices."""
    return graph_family(4)


@pytest.fixture(scope="session")
def family():
    return graph_family(5)
