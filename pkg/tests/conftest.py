import numpy as np
import pytest

from buresgeo.sampling import random_density_matrix, random_spectral, random_tangent


def rand_state(n, seed, normalized=True):
    return random_density_matrix(n, np.random.default_rng(seed), normalized=normalized)


def rand_spec(n, seed):
    return random_spectral(n, np.random.default_rng(seed))


def rand_herm(n, seed, traceless=False):
    return random_tangent(n, np.random.default_rng(seed), traceless=traceless)


@pytest.fixture
def rng():
    return np.random.default_rng(20240801)
