import numpy as np
import pytest

from egab.market import generate_synthetic


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def synthetic_market():
    """The seeded 10-asset, 500-period market used by the acceptance suite."""
    return generate_synthetic(10, 500, seed=4, drift=0.001, volatility=0.02)


def random_portfolio(rng, n, min_weight=1e-3):
    """Interior simplex point with entries bounded away from zero."""
    while True:
        w = rng.dirichlet(np.ones(n) * 2)
        if w.min() >= min_weight:
            return w


def sort_projection(v):
    """Independent sort-based Euclidean projection onto the unit simplex."""
    v = np.asarray(v, dtype=float)
    n = v.size
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u) - 1.0
    rho = np.nonzero(u * np.arange(1, n + 1) > cssv)[0][-1]
    theta = cssv[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)
