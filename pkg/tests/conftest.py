import os

import pytest
from hypothesis import HealthCheck, settings

from chaincover.fixtures import grid, hexagon, p5, singleton, u_relation
from chaincover.space import entourage_from_scale

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def hexs():
    return hexagon()


@pytest.fixture(scope="session")
def P5():
    return p5()


@pytest.fixture(scope="session")
def one():
    return singleton()


@pytest.fixture(scope="session")
def G():
    return grid()


@pytest.fixture(scope="session")
def U(G):
    return u_relation(G)


@pytest.fixture(scope="session")
def hex_scale(hexs):
    return lambda eps: entourage_from_scale(hexs, eps)
