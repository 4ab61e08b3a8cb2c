from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from nozzle_solver.core.config import get_settings
from nozzle_solver.core.errors import ValidationError
from nozzle_solver.model.models import GasParams
from nozzle_solver.nonlinear.models import BoundaryData, IterationConfig
from nozzle_solver.spectral import CosineSeries, SineSeries, max_modes

settings = get_settings()

ARTIFACTS = ("csv", "svg", "json")


class DomainConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    L: float = Field(0.5, gt=0.0, description="Nozzle length")
    n1: int = Field(default_factory=lambda: settings.DEFAULT_N1, ge=5)
    n2: int = Field(default_factory=lambda: settings.DEFAULT_N2, ge=9)
    m: int = Field(default_factory=lambda: settings.DEFAULT_MODES, ge=1)

    @model_validator(mode="after")
    def _check_truncation(self) -> "DomainConfig":
        if self.m > max_modes(self.n2):
            raise ValueError(f"m={self.m} exceeds the {max_modes(self.n2)} modes resolved by n2={self.n2}")
        return self


class DataConfig(BaseModel):
    """Perturbations of the background traces as mode coefficients, lowest index first."""

    model_config = ConfigDict(frozen=True)

    u_en: List[float] = Field(default_factory=list, description="cosine coefficients of u_en - u0")
    E_en: List[float] = Field(default_factory=list, description="cosine coefficients of E_en - E0")
    Phi_ex: List[float] = Field(default_factory=list, description="cosine coefficients of Phi_ex - Phi0(L)")
    S_en: List[float] = Field(default_factory=list, description="cosine coefficients of S_en - S0")
    v_en: List[float] = Field(default_factory=list, description="sine coefficients of the inlet u2")
    b: List[float] = Field(default_factory=list, description="cosine coefficients of the x2 profile of b - b0")
    b_profile: List[float] = Field(default_factory=lambda: [1.0], min_length=1, description="polynomial in x1 multiplying b")
    forcing: float = Field(0.0, ge=0.0, description="amplitude of the seeded forcing of solve-linear")

    def boundary_data(self, m: int) -> BoundaryData:
        def cosine(name: str) -> CosineSeries:
            coeffs = getattr(self, name)
            if len(coeffs) > m + 1:
                raise ValidationError(f"{name} has {len(coeffs)} coefficients, at most m + 1 = {m + 1}", field=name)
            return CosineSeries(np.asarray(coeffs, dtype=float)).padded(m + 1)

        if len(self.v_en) > 2 * m:
            raise ValidationError(f"v_en has {len(self.v_en)} coefficients, at most 2m = {2 * m}", field="v_en")
        return BoundaryData(
            m=m,
            du_en=cosine("u_en"),
            dE_en=cosine("E_en"),
            dPhi_ex=cosine("Phi_ex"),
            dS_en=cosine("S_en"),
            v_en=SineSeries(np.asarray(self.v_en, dtype=float)).padded(2 * m),
            b_series=cosine("b"),
            b_profile=tuple(self.b_profile),
        )


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    gas: GasParams
    domain: DomainConfig = Field(default_factory=DomainConfig)
    data: DataConfig = Field(default_factory=DataConfig)
    solver: IterationConfig = Field(default_factory=IterationConfig)
    auto_radii: bool = False
    outputs: List[str] = Field(default_factory=lambda: list(ARTIFACTS))

    @model_validator(mode="after")
    def _check_outputs(self) -> "RunConfig":
        unknown = sorted(set(self.outputs) - set(ARTIFACTS))
        if unknown:
            raise ValueError(f"unknown artifacts {unknown}; choose from {list(ARTIFACTS)}")
        return self

    def wants(self, artifact: str) -> bool:
        return artifact in self.outputs
