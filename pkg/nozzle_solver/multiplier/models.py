import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field


class RiccatiCase(str, Enum):
    POSITIVE_DISCRIMINANT = "PositiveDiscriminant"
    NON_POSITIVE_DISCRIMINANT = "NonPositiveDiscriminant"


class RiccatiConstants(BaseModel):
    """Constants of the weight equation -W' - a2 W^2 + 2 a1 W - a0 = lambda0."""

    model_config = ConfigDict(frozen=True)

    a0: float = Field(..., gt=0.0)
    a1: float
    a2: float = Field(..., gt=0.0)
    delta_used: float = Field(0.0, ge=0.0, description="delta1 entering a0, a2 and the Morrey shift of a1")
    mu1: float = Field(1.0, gt=0.0, description="min of h1 over the coefficient window")
    kappa1: float = Field(1.0, gt=0.0)
    c_star: float = 10.0
    c_flat: float = 10.0
    lambda1_star: float = Field(math.pi / 8, gt=0.0, lt=math.pi / 4)
    t_bound: float = Field(math.inf, gt=0.0, description="T_max - eps0 (or T_* - eps0) clamp")

    @property
    def discriminant(self) -> float:
        return self.a0 * self.a2 - self.a1 ** 2

    @property
    def case(self) -> RiccatiCase:
        if self.discriminant > 0.0:
            return RiccatiCase.POSITIVE_DISCRIMINANT
        return RiccatiCase.NON_POSITIVE_DISCRIMINANT

    @property
    def a_star(self) -> float:
        return (self.a1 ** 2 - self.a0 * self.a2) / self.a2

    def with_updates(self, **changes) -> "RiccatiConstants":
        return RiccatiConstants(**{**self.model_dump(), **changes})


@dataclass(frozen=True, eq=False)
class WeightFunction:
    """Closed-form weight W(x1) = root * cot(phase + a2 * root * x1) + a1 / a2 sampled on x1."""

    lambda0: float
    constants: RiccatiConstants
    root: float
    phase: float
    x1: np.ndarray
    W: np.ndarray
    dW: np.ndarray

    @property
    def L(self) -> float:
        return float(self.x1[-1])

    def residual(self) -> np.ndarray:
        rc = self.constants
        return -self.dW - rc.a2 * self.W ** 2 + 2.0 * rc.a1 * self.W - rc.a0 - self.lambda0


@dataclass
class ConditionReport:
    lambda0: float
    delta: float
    c_star: float
    min_q1_minus_q3: float
    min_q2_over_a22: float
    min_W: float

    @property
    def passed(self) -> bool:
        return (
            self.min_W > 0.0
            and self.min_q1_minus_q3 >= self.lambda0 * (1.0 - 1e-9)
            and self.min_q2_over_a22 >= self.lambda0 * (1.0 - 1e-9)
        )


@dataclass
class AcceleratingReport:
    constants: RiccatiConstants
    t_star_bound: float
    t_max_bound: float
    generic_length: float
    accelerating_length_t_star: float
    accelerating_length_t_max: float

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "bound": ["generic", "accelerating (T*-eps0)", "accelerating (Tmax-eps0)"],
                "length": [self.generic_length, self.accelerating_length_t_star, self.accelerating_length_t_max],
            }
        )


@dataclass
class CriticalLengthResult:
    length: float
    case: RiccatiCase
    lambda_peak: Optional[float] = None
