import numpy as np
import pytest

from app.classical import MonteCarloConfig
from app.model import FockBasisSpec, ModelParams, build_fock_hamiltonian, diagonalize


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the slow acceptance checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def params():
    """Superradiant model at a small spin, gamma = 2 gamma_c."""
    return ModelParams(omega=1.0, omega0=1.0, gamma=1.0, j=3.0)


@pytest.fixture(scope="session")
def fock_basis(params):
    return FockBasisSpec(params.j, 60)


@pytest.fixture(scope="session")
def spectrum(params, fock_basis):
    return diagonalize(build_fock_hamiltonian(params, fock_basis), params=params, basis=fock_basis)


@pytest.fixture
def small_mc():
    return MonteCarloConfig(n_samples=40_000, n_batches=20, seed=7)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
