import numpy as np
import pytest

import langcompete as lc


@pytest.fixture(scope="session")
def fixtures():
    return lc.bundled_fixtures()


@pytest.fixture(scope="session")
def singapore(fixtures):
    return fixtures["singapore-whole"]


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_simplex(rng, n):
    """Interior simplex point (every component strictly positive)."""
    v = rng.dirichlet(np.ones(n))
    return 0.99 * v + 0.01 / n


@pytest.fixture
def fast_opts():
    """Loose steady-state options for cheap tests."""
    return lc.SteadyOptions(step=0.01, t_max=5e4, derivative_tolerance=1e-9)
