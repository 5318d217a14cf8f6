import numpy as np
import pytest

from schurcomp.core import random_hermitian


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_contraction(n, m, rng, norm=0.5):
    K = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    return norm * K / np.linalg.norm(K, 2)


def mixed_instance(rng, nmax=8):
    """Random Hermitian (A, D) with mixed inertia and occasional exact zeros."""
    n = int(rng.integers(1, nmax + 1))
    m = int(rng.integers(1, nmax + 1))
    la = rng.uniform(-3, 3, n)
    mu = rng.uniform(-3, 3, m)
    mu[rng.random(m) < 0.15] = 0.0
    return random_hermitian(la, rng), random_hermitian(mu, rng)
