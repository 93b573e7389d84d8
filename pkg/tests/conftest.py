import numpy as np
import pytest

from tauop.grid import Grid1D, gaussian_signal, hermite_signal


@pytest.fixture(scope="session")
def grid():
    return Grid1D.from_length(16.0, 256)


@pytest.fixture(scope="session")
def small_grid():
    return Grid1D.from_length(16.0, 128)


@pytest.fixture(scope="session")
def phi(grid):
    return gaussian_signal(grid)


@pytest.fixture(scope="session")
def test_signals(grid):
    return [
        gaussian_signal(grid),
        gaussian_signal(grid, a=2.0, x0=0.5, w0=-0.25),
        gaussian_signal(grid, a=0.5, x0=-1.0, w0=0.5),
        hermite_signal(grid, 1),
        hermite_signal(grid, 2),
    ]


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(1234))
