from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from pydantic import BaseModel, ConfigDict, Field

from nozzle_solver.core.errors import ValidationError
from nozzle_solver.spectral import CosineSeries, Field2D, SineSeries


class IterationConfig(BaseModel):
    """Radii, tolerances and measured constants of the fixed-point iterations."""

    model_config = ConfigDict(frozen=True)

    delta: float = Field(0.5, gt=0.0, description="radius of the (psi, Psi) iteration set, discrete H1")
    delta_e: Optional[float] = Field(None, gt=0.0, description="radius for the entropy iterate Y")
    delta_p: Optional[float] = Field(None, gt=0.0)
    delta_v: Optional[float] = Field(None, gt=0.0, description="radius for the stream potential")
    max_iter: int = Field(100, ge=1)
    fp_tol: float = Field(1e-10, gt=0.0)
    sigma: Optional[float] = Field(None, ge=0.0, description="measured boundary-data size")
    eps0: float = Field(0.05, gt=0.0, description="distance kept from T_max when sizing the critical length")
    check_length: bool = True
    c_star: Optional[float] = Field(None, gt=0.0, description="measured linear stability constant")
    c_2star: Optional[float] = Field(None, gt=0.0, description="measured transport stability constant")

    def with_radii(self, sigma_v: float, c_star: float, c_2star: float) -> "IterationConfig":
        """Nested radii delta_e = 2 C** sigma_v, delta_p = 12 C* delta_e + 4 C* sigma_v, delta_v = 2 C* delta_e."""
        delta_e = 2.0 * c_2star * sigma_v
        changes = dict(
            sigma=sigma_v,
            c_star=c_star,
            c_2star=c_2star,
            delta_e=delta_e or None,
            delta_p=(12.0 * c_star * delta_e + 4.0 * c_star * sigma_v) or None,
            delta_v=(2.0 * c_star * delta_e) or None,
        )
        return IterationConfig(**{**self.model_dump(), **changes})


@dataclass(frozen=True, eq=False)
class BoundaryData:
    """Boundary data as perturbations of the background traces.

    du_en = u_en - u0, dE_en = E_en - E0, dPhi_ex = Phi_ex - Phi0(L), dS_en = S_en - S0
    (cosine series), v_en (sine series), and b - b0 = b_profile(x1) * b_series(x2).
    Flows are symmetric about x2 = 0, so v_en may only use the even sine indices.
    """

    m: int
    du_en: CosineSeries
    dE_en: CosineSeries
    dPhi_ex: CosineSeries
    dS_en: CosineSeries
    v_en: SineSeries
    b_series: CosineSeries
    b_profile: Tuple[float, ...] = (1.0,)

    def __post_init__(self):
        odd = self.v_en.coeffs[0::2]
        if np.any(odd != 0.0):
            raise ValidationError(
                "v_en must be odd in x2: only even sine indices may be nonzero",
                value=float(np.max(np.abs(odd))),
            )

    @classmethod
    def zero(cls, m: int) -> "BoundaryData":
        return cls(
            m=m,
            du_en=CosineSeries.zeros(m),
            dE_en=CosineSeries.zeros(m),
            dPhi_ex=CosineSeries.zeros(m),
            dS_en=CosineSeries.zeros(m),
            v_en=SineSeries.zeros(2 * m),
            b_series=CosineSeries.zeros(m),
        )

    def with_updates(self, **changes) -> "BoundaryData":
        values = {name: getattr(self, name) for name in self.__dataclass_fields__}
        values.update(changes)
        return BoundaryData(**values)

    def scaled(self, factor: float) -> "BoundaryData":
        return self.with_updates(
            du_en=self.du_en.scaled(factor),
            dE_en=self.dE_en.scaled(factor),
            dPhi_ex=self.dPhi_ex.scaled(factor),
            dS_en=self.dS_en.scaled(factor),
            v_en=self.v_en.scaled(factor),
            b_series=self.b_series.scaled(factor),
        )

    @property
    def irrotational(self) -> bool:
        return self.dS_en.norm() == 0.0 and self.v_en.norm() == 0.0

    def b_delta(self, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
        return Polynomial(self.b_profile)(x1)[:, None] * self.b_series.evaluate(x2)[None, :]

    def sigma(self, x2: np.ndarray, x1: Optional[np.ndarray] = None) -> float:
        """Sum of the sup norms of every perturbation on the grid."""
        total = sum(
            float(np.max(np.abs(series.evaluate(x2))))
            for series in (self.du_en, self.dE_en, self.dPhi_ex, self.dS_en, self.v_en)
        )
        if x1 is not None:
            total += float(np.max(np.abs(self.b_delta(x1, x2))))
        else:
            total += float(np.max(np.abs(self.b_series.evaluate(x2))))
        return total

    def compatibility_data(self) -> Dict[str, object]:
        return {
            "u_en": self.du_en,
            "E_en": self.dE_en,
            "Phi_ex": self.dPhi_ex,
            "S_en": self.dS_en,
            "v_en": self.v_en,
            "b": self.b_series,
        }


@dataclass(frozen=True, eq=False)
class LagrangianMap:
    """Inlet label of the streamline through each node, built from the streamfunction."""

    x1: np.ndarray
    x2: np.ndarray
    labels: np.ndarray
    stream: np.ndarray
    entropy: np.ndarray
    flux_drift: float


@dataclass
class Diagnostics:
    iterations: int = 0
    outer_iterations: int = 0
    history: List[float] = field(default_factory=list)
    outer_history: List[float] = field(default_factory=list)
    potential_residual: float = float("nan")
    poisson_residual: float = float("nan")
    vorticity_residual: float = 0.0
    vorticity_consistency: float = 0.0
    transport_residual: float = 0.0
    mass_flux_drift: float = float("nan")
    max_pseudo_bernoulli: float = float("nan")
    supersonic_margin: float = float("nan")
    background_margin: float = float("nan")
    min_u1: float = float("nan")
    min_rho: float = float("nan")
    constants: Dict[str, float] = field(default_factory=dict)

    def as_dict(self) -> Dict[str, object]:
        return dict(self.__dict__)


@dataclass(frozen=True, eq=False)
class SolutionBundle:
    """Converged perturbations, the physical fields they describe, and diagnostics."""

    psi: Field2D
    Psi: Field2D
    phi: Field2D
    Y: Field2D
    x2: np.ndarray
    fields: Dict[str, np.ndarray]
    diagnostics: Diagnostics
    labels: Optional[LagrangianMap] = None

    @property
    def x1(self) -> np.ndarray:
        return self.psi.x1


@dataclass
class StabilityBoundary:
    amplitude: float
    tried: Sequence[Tuple[float, bool, int]] = field(default_factory=list)
