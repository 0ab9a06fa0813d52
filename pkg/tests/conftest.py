import numpy as np
import pytest

from swtsim.harness import warm_up
from swtsim.phasespace import PhaseSpaceGrid
from swtsim.signals import WavefunctionGrid


@pytest.fixture(scope="session")
def warmed():
    """JIT-compile every numba kernel once so timed tests measure work."""
    warm_up()
    return True


@pytest.fixture
def unit_gaussian():
    """epsilon = 1 Gaussian with unit L2 norm on [-6, 6]."""
    def build(n_x=512, x_min=-6.0, x_max=6.0, epsilon=1.0):
        dx = (x_max - x_min) / n_x
        x = x_min + np.arange(n_x) * dx
        values = 2.0 ** 0.25 * np.exp(-np.pi * x * x / epsilon)
        return WavefunctionGrid(x_min, x_max, epsilon, values.astype(np.complex128))
    return build


def make_grid(values, x_min=-1.0, x_max=1.0, k_min=-1.0, k_max=1.0,
              epsilon=1.0, sigma_x=0.0, sigma_k=0.0, t=0.0):
    return PhaseSpaceGrid(x_min, x_max, k_min, k_max, epsilon,
                          sigma_x, sigma_k, np.asarray(values, dtype=float), t)
