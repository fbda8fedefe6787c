"""
Fixtures for pytest tests in the tests directory.
"""

import logging

import pytest

from scale_dynamics.fields import DiffEngine
from scale_dynamics.kepler import KeplerSystem
from shared.config import RunConfig
from shared.test_utils import create_standard_test_config


@pytest.fixture
def unit_system() -> KeplerSystem:
    """GM = m = Lambda = 1, the figure parameters."""
    return KeplerSystem.from_gm(gm=1.0, m=1.0, Lambda=1.0)


@pytest.fixture
def heavy_system() -> KeplerSystem:
    return KeplerSystem(G=1.0, M=1.5, m=2.0, Lambda=0.8)


@pytest.fixture
def nonlinear_system() -> KeplerSystem:
    """K = 2 m Lambda."""
    return KeplerSystem.from_gm(gm=1.0, m=1.0, Lambda=1.0, Kconst=2.0)


@pytest.fixture
def fd4_engine() -> DiffEngine:
    return DiffEngine(stencil_order=4, use_analytic=False)


@pytest.fixture
def fd2_engine() -> DiffEngine:
    return DiffEngine(stencil_order=2, use_analytic=False)


@pytest.fixture
def test_config() -> RunConfig:
    return create_standard_test_config()


@pytest.fixture(autouse=True)
def quiet_package_loggers() -> None:
    for name in ("scale_dynamics", "app"):
        logging.getLogger(name).handlers.clear()
