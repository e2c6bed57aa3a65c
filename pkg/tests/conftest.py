import numpy as np
import pytest

from sglab.grids import GridSpec


@pytest.fixture(scope="session")
def grid40():
    """Default working grid: [-40, 40] with h = 0.02."""
    return GridSpec(-40.0, 40.0, 4001)


@pytest.fixture(scope="session")
def grid30():
    """Spectral-test grid: [-30, 30] with h = 0.015."""
    return GridSpec(-30.0, 30.0, 4001)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240811)
