import math

import numpy as np
import pytest

from nozzle_solver.background import hamiltonian, integrate_background
from nozzle_solver.model import GasParams

BASE = dict(gamma=2.0, S0=1.0, J0=math.sqrt(2.0), b0=0.5)


@pytest.fixture(scope="session")
def gas_equilibrium() -> GasParams:
    return GasParams(**BASE, rho0=0.5, E0=0.0)


@pytest.fixture(scope="session")
def gas_periodic() -> GasParams:
    """Accelerating periodic orbit (E0 > 0)."""
    return GasParams(**BASE, rho0=0.45, E0=0.1)


@pytest.fixture(scope="session")
def gas_separatrix() -> GasParams:
    gp = GasParams(**BASE, rho0=0.5, E0=0.0)
    return gp.with_updates(E0=-math.sqrt(2.0 * hamiltonian(gp, gp.rho0)))


@pytest.fixture(scope="session")
def gas_blowup() -> GasParams:
    return GasParams(**BASE, rho0=0.5, E0=-1.0)


@pytest.fixture(scope="session")
def bg_equilibrium(gas_equilibrium):
    return integrate_background(gas_equilibrium, L=0.5, n1=129)


@pytest.fixture(scope="session")
def bg_periodic(gas_periodic):
    return integrate_background(gas_periodic, L=0.5, n1=129)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
