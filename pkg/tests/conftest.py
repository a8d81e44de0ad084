import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_points(rng, n, m, scale=1.0):
    return rng.normal(size=(n, m)) * scale
