from dataclasses import dataclass
from typing import Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class GasParams(BaseModel):
    """Constants fixing the one-dimensional background problem."""

    model_config = ConfigDict(frozen=True)

    gamma: float = Field(..., gt=1.0, description="Adiabatic constant")
    J0: float = Field(..., gt=0.0, description="Mass flux of the background")
    S0: float = Field(..., gt=0.0, description="Entropy constant")
    b0: float = Field(..., gt=0.0, description="Background ion density")
    rho0: float = Field(..., gt=0.0, description="Inlet density")
    E0: float = Field(0.0, description="Inlet electric field")

    @model_validator(mode="after")
    def _check_supersonic(self) -> "GasParams":
        rho_s = self.rho_s
        if not self.b0 < rho_s:
            raise ValueError(f"b0 not below the sonic density {rho_s:.6g}")
        if not self.rho0 < rho_s:
            raise ValueError(f"rho0 not supersonic (sonic density {rho_s:.6g})")
        return self

    @property
    def rho_s(self) -> float:
        return (self.J0 ** 2 / (self.gamma * self.S0)) ** (1.0 / (self.gamma + 1.0))

    @property
    def m0(self) -> float:
        return self.J0 * self.S0 ** (1.0 / (self.gamma - 1.0))

    @property
    def u0(self) -> float:
        return self.J0 / self.rho0

    @property
    def B0(self) -> float:
        """Bernoulli constant of the inlet state, equal to Phi0(0)."""
        return 0.5 * self.u0 ** 2 + self.gamma * self.S0 / (self.gamma - 1.0) * self.rho0 ** (self.gamma - 1.0)

    def with_updates(self, **changes: float) -> "GasParams":
        return GasParams(**{**self.model_dump(), **changes})


@dataclass(frozen=True)
class FlowState:
    """Pointwise (or gridwise) physical state; arrays broadcast together."""

    rho: np.ndarray
    u: Tuple[np.ndarray, np.ndarray]
    S: np.ndarray
    Phi: np.ndarray
    gamma: float

    def __post_init__(self):
        if not self.gamma > 1.0:
            raise ValueError("gamma must exceed 1")
        if np.any(np.asarray(self.rho) <= 0.0):
            raise ValueError("density must be positive")
        if np.any(np.asarray(self.S) <= 0.0):
            raise ValueError("entropy must be positive")

    @property
    def speed(self) -> np.ndarray:
        return np.hypot(self.u[0], self.u[1])

    @property
    def pressure(self) -> np.ndarray:
        return self.S * np.power(self.rho, self.gamma)

    @property
    def enthalpy(self) -> np.ndarray:
        return self.gamma / (self.gamma - 1.0) * self.S * np.power(self.rho, self.gamma - 1.0)
