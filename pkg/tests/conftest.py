import pytest
from hypothesis import settings

from clusteradd.hammocks import structure_for
from clusteradd.quiver import preset

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def a2():
    return preset("A2", "linear")


@pytest.fixture(scope="session")
def st_a2(a2):
    return structure_for(a2)
