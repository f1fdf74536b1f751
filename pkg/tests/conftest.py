import numpy as np
import pytest

from ellcauchy import elliptic_kernel, lattice_new


@pytest.fixture(scope="session")
def lat():
    return lattice_new(1.0, 0.3 + 0.7j)


@pytest.fixture(scope="session")
def kern(lat):
    return elliptic_kernel(lat)


@pytest.fixture()
def rng():
    return np.random.default_rng(2024)


def cell_points(lat, rng, count):
    """Random points in a shrunk fundamental cell (away from the boundary)."""
    a = rng.uniform(-0.35, 0.35, count)
    b = rng.uniform(-0.35, 0.35, count)
    return 2 * a * lat.omega + 2 * b * lat.omega_prime
