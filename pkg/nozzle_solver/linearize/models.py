from dataclasses import dataclass, field, fields, replace
from typing import Optional

import numpy as np

from nozzle_solver.background.models import Background1D
from nozzle_solver.model.models import GasParams

_SCALAR_FIELDS = ("gas",)


@dataclass(frozen=True, eq=False)
class BarCoeffs:
    """Background quantities and linearized coefficients sampled on the x1 grid.

    `column()` reshapes every sampled array to (n1, 1) so the coefficients
    broadcast against (n1, n2) grid fields; `at(x1)` interpolates each array
    linearly, so the identities between fields hold exactly only at nodes.
    """

    gas: GasParams
    x1: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    E: np.ndarray
    Phi0: np.ndarray
    c2: np.ndarray
    beta_bar: np.ndarray
    du: np.ndarray
    a22: np.ndarray
    d_a22: np.ndarray
    a1: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    h1: np.ndarray
    h2: np.ndarray

    @classmethod
    def from_background(cls, bg: Background1D) -> "BarCoeffs":
        gp = bg.gas
        g = gp.gamma
        u, E, rho = bg.u, bg.E, bg.rho
        c2 = bg.sound_speed_sq
        beta_bar = c2 - u ** 2
        du = -u * E / beta_bar
        a22 = c2 / (u ** 2 - c2)
        h1 = rho / c2
        return cls(
            gas=gp,
            x1=bg.grid,
            rho=rho,
            u=u,
            E=E,
            Phi0=bg.Phi0,
            c2=c2,
            beta_bar=beta_bar,
            du=du,
            a22=a22,
            d_a22=-(a22 ** 2) * (g + 1.0) * u ** g * du / (g * gp.m0 ** (g - 1.0)),
            a1=E * (g * u ** 2 + c2) / beta_bar ** 2,
            b1=u / beta_bar,
            b2=-(g - 1.0) * E * u / beta_bar ** 2,
            h1=h1,
            h2=-u * h1,
        )

    def _mapped(self, fn) -> "BarCoeffs":
        return replace(self, **{f.name: fn(getattr(self, f.name)) for f in fields(self) if f.name not in _SCALAR_FIELDS})

    def column(self) -> "BarCoeffs":
        return self._mapped(lambda a: a[:, None])

    def at(self, x1) -> "BarCoeffs":
        x1 = np.asarray(x1, dtype=float)
        grid = self.x1
        return self._mapped(lambda a: np.interp(x1, grid, a))

    @property
    def B_bar(self) -> np.ndarray:
        return self.u * self.E / self.beta_bar

    @property
    def mu1L(self) -> float:
        return float(np.min(self.h1))

    @property
    def mu0_prime(self) -> float:
        """Largest mu in (0, 1) with mu <= a22 <= 1/mu on the grid."""
        return float(min(np.min(self.a22), 1.0 / np.max(self.a22), 1.0))

    @property
    def L(self) -> float:
        return float(self.x1[-1])


@dataclass(frozen=True, eq=False)
class PerturbationPoint:
    """Perturbation arguments at one or many points; all arrays broadcast together.

    z is the Psi value, p = grad Psi, q = grad psi, r = grad of the stream potential,
    xi = Y, (xi_x1, eta) = grad Y and M2x2[i][j] = d_i of (r2, -r1)_j.
    """

    z: np.ndarray = 0.0
    p: tuple = (0.0, 0.0)
    q: tuple = (0.0, 0.0)
    r: tuple = (0.0, 0.0)
    xi: np.ndarray = 0.0
    eta: np.ndarray = 0.0
    xi_x1: np.ndarray = 0.0
    M2x2: Optional[tuple] = None

    @property
    def r_perp(self) -> tuple:
        return (self.r[1], -self.r[0])

    def hessian_term(self, w1, w2):
        """M[w, w] = sum_ij m_ij w_i w_j, zero when no matrix is carried."""
        if self.M2x2 is None:
            return 0.0
        (m11, m12), (m21, m22) = self.M2x2
        return m11 * w1 * w1 + (m12 + m21) * w1 * w2 + m22 * w2 * w2


@dataclass
class AdmissibilityReport:
    delta: float
    kappa0: float
    kappa1: float
    samples: int
    wall_a12: float = field(default=0.0)
