from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import pandas as pd

from nozzle_solver.model.models import GasParams


class OrbitClass(str, Enum):
    PERIODIC = "Periodic"
    SEPARATRIX = "Separatrix"
    SONIC_BLOWUP = "SonicBlowup"


@dataclass(frozen=True)
class OrbitClassification:
    orbit: OrbitClass
    discriminant: float
    tolerance: float

    @property
    def is_periodic(self) -> bool:
        return self.orbit is OrbitClass.PERIODIC


@dataclass(frozen=True)
class CriticalAbscissas:
    t_min: float
    t_max: float
    t_star: Optional[float] = None


@dataclass(frozen=True)
class Background1D:
    """Sampled one-dimensional supersonic background on [0, L]."""

    gas: GasParams
    grid: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    E: np.ndarray
    phi0: np.ndarray
    Phi0: np.ndarray
    orbit: OrbitClassification
    t_max: float
    t_min: float
    t_star: Optional[float]
    eps0: float
    mu0: float

    @property
    def L(self) -> float:
        return float(self.grid[-1])

    @property
    def n1(self) -> int:
        return int(self.grid.size)

    @property
    def h(self) -> float:
        return float(self.grid[1] - self.grid[0])

    @property
    def sound_speed_sq(self) -> np.ndarray:
        gp = self.gas
        return gp.gamma * gp.S0 * np.power(self.rho, gp.gamma - 1.0)

    @property
    def rho_prime(self) -> np.ndarray:
        gp = self.gas
        denominator = gp.gamma * gp.S0 * np.power(self.rho, gp.gamma - 1.0) - gp.J0 ** 2 / self.rho ** 2
        return self.E * self.rho / denominator

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "x1": self.grid,
                "rho": self.rho,
                "u": self.u,
                "E": self.E,
                "phi0": self.phi0,
                "Phi0": self.Phi0,
            }
        )
