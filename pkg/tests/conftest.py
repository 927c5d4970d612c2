import numpy as np
import pytest

from inclab import Ellipse, Polygon, discretize


@pytest.fixture(scope="session")
def ellipse21_grid():
    return discretize(Ellipse(2.0, 1.0), 256)


@pytest.fixture(scope="session")
def circle_grid():
    return discretize(Ellipse(1.0, 1.0), 256)


@pytest.fixture(scope="session")
def square_grid():
    return discretize(
        Polygon(((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))), 256
    )


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260822)
