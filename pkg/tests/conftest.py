import pytest

from seminil.quiver import Quiver
from seminil.sampler import SamplerConfig


@pytest.fixture
def jordan():
    return Quiver(["0"], [("a", "0", "0")])


@pytest.fixture
def g2():
    return Quiver(["0"], [("a", "0", "0"), ("b", "0", "0")])


@pytest.fixture
def g3():
    return Quiver(["0"], [("a", "0", "0"), ("b", "0", "0"), ("c", "0", "0")])


@pytest.fixture
def a2():
    return Quiver(["0", "1"], [("a", "0", "1")])


@pytest.fixture
def loop_pendant():
    # one loop vertex with a pendant neighbour
    return Quiver(["0", "1"], [("l", "0", "0"), ("a", "0", "1")])


@pytest.fixture
def cfg():
    return SamplerConfig(seed=7)
