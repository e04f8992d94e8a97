import pytest

from nanoribbon.config import SolverConfig
from nanoribbon.spectrum import RibbonGeometry
from nanoribbon.synthesis import example_potential


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long end-to-end numerical runs")


@pytest.fixture
def geom():
    return RibbonGeometry(L=1.33)


@pytest.fixture
def example_phi():
    return example_potential(delta=1e-2)


@pytest.fixture
def symmetric_potential():
    """Example potential centred exactly at L/2."""
    return example_potential(y_center=0.665, delta=1e-2)


@pytest.fixture
def solver_config():
    return SolverConfig(J_modes=6, points_per_unit=24, margin=3.0)
