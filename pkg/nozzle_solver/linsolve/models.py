from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import sparse

from nozzle_solver.linearize.models import BarCoeffs
from nozzle_solver.spectral import BasisKind, CosineSeries, Field2D, x2_grid


@dataclass(frozen=True, eq=False)
class LinearProblem:
    """Frozen-coefficient boundary value problem for (psi, Psi).

    L1 = psi_11 + 2 a12 psi_12 - a22 psi_22 + a1 psi_1 + b1 Psi_1 + b2 Psi = f1
    L2 = Psi_11 + Psi_22 - h1 Psi - h2 psi_1                               = f2

    with psi = psi0, psi_1 = g1 and Psi_1 = g2 at x1 = 0, Psi = psi_ex at x1 = L.
    a12 and a22 are sampled on the (x1, x2) grid (shape (n1, n2)); a12 must vanish
    on the walls. The bar coefficients a1, b1, b2, h1, h2 come from `bar`.
    """

    bar: BarCoeffs
    x2: np.ndarray
    a12: np.ndarray
    a22: np.ndarray
    f1: Field2D
    f2: Field2D
    g1: CosineSeries
    g2: CosineSeries
    psi_ex: CosineSeries
    m: int
    psi0: Optional[CosineSeries] = None

    @classmethod
    def at_background(
        cls,
        bar: BarCoeffs,
        m: int,
        x2: Optional[np.ndarray] = None,
        **overrides,
    ) -> "LinearProblem":
        """Problem with background coefficients (a12 = 0, a22 = a22_bar) and zero data."""
        x2 = x2_grid() if x2 is None else x2
        x1 = bar.x1
        values = dict(
            bar=bar,
            x2=x2,
            a12=np.zeros((x1.size, x2.size)),
            a22=np.repeat(bar.a22[:, None], x2.size, axis=1),
            f1=Field2D.zeros(BasisKind.COSINE, m + 1, x1),
            f2=Field2D.zeros(BasisKind.COSINE, m + 1, x1),
            g1=CosineSeries.zeros(m),
            g2=CosineSeries.zeros(m),
            psi_ex=CosineSeries.zeros(m),
            m=m,
        )
        values.update(overrides)
        return cls(**values)

    @property
    def x1(self) -> np.ndarray:
        return self.bar.x1

    @property
    def n1(self) -> int:
        return int(self.bar.x1.size)

    @property
    def L(self) -> float:
        return self.bar.L

    @property
    def inlet_trace(self) -> CosineSeries:
        return self.psi0 if self.psi0 is not None else CosineSeries.zeros(self.m)

    def boundary_lift(self) -> Field2D:
        """Psi_bd = (x1 - L) g2(x2) + psi_ex(x2) as mode profiles."""
        n_modes = self.m + 1
        g2 = self.g2.padded(n_modes).coeffs[:, None]
        ex = self.psi_ex.padded(n_modes).coeffs[:, None]
        return Field2D((self.x1 - self.L)[None, :] * g2 + ex, self.x1)


@dataclass(frozen=True, eq=False)
class ModeSystem:
    """Galerkin mode couplings and the assembled finite-difference system.

    Coupling arrays have shape (n1, m + 1, m + 1) and act as rows k, columns j:
    c12[i, k, j] = 2 <a12 eta_j', eta_k>, d22[i, k, j] = (j pi)^2 <a22 eta_j, eta_k>.
    The bar coefficients stay diagonal and are kept as (n1,) profiles.
    Unknowns are stored node-major: index = i * 2 (m + 1) + var * (m + 1) + k, with
    var 0 for theta_k (psi modes) and var 1 for Theta_k (Psi-hat modes).
    """

    m: int
    x1: np.ndarray
    c12: np.ndarray
    d22: np.ndarray
    a1: np.ndarray
    b1: np.ndarray
    b2: np.ndarray
    h1: np.ndarray
    h2: np.ndarray
    f1: np.ndarray
    f2: np.ndarray
    g1: np.ndarray
    psi0: np.ndarray
    psi_bd: Field2D
    matrix: sparse.csc_matrix
    rhs: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.m + 1

    @property
    def n1(self) -> int:
        return int(self.x1.size)

    @property
    def size(self) -> int:
        return 2 * self.n_modes * self.n1

    def unpack(self, vector: np.ndarray):
        """Split a state vector into (theta, Theta) mode profiles of shape (m + 1, n1)."""
        blocks = vector.reshape(self.n1, 2, self.n_modes)
        return blocks[:, 0, :].T.copy(), blocks[:, 1, :].T.copy()

    def pack(self, theta: np.ndarray, Theta: np.ndarray) -> np.ndarray:
        return np.stack([theta.T, Theta.T], axis=1).ravel()


@dataclass(frozen=True, eq=False)
class LinearSolution:
    psi: Field2D
    Psi_hat: Field2D
    Psi: Field2D
    system: ModeSystem
    residual: float


@dataclass
class EnergyReport:
    direct: float
    j1: float
    j2: float
    j3: float
    discrepancy: float
    estimate_ratio: Optional[float] = None
    trivial: bool = False
    terms: dict = field(default_factory=dict)

    @property
    def decomposed(self) -> float:
        return self.j1 + self.j2 + self.j3
