import numpy as np
import pytest

from secantflow import adapted, fields, levelsets
from secantflow.polyalg import parse_poly

EXAMPLE1 = "(x^2-1/4)*(y^3-(1/4)*y)"


@pytest.fixture(scope="session")
def h1():
    return parse_poly(EXAMPLE1)


@pytest.fixture(scope="session")
def gamma1(h1):
    return adapted.sample_gamma(h1)


@pytest.fixture(scope="session")
def family1(h1):
    """Isolated Example-1 family with default parameters."""
    return levelsets.build_H_isolated(h1)


@pytest.fixture(scope="session")
def bundle1(family1):
    return fields.build_bundle(family1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
