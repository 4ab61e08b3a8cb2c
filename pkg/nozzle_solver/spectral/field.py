from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from nozzle_solver.spectral.series import (
    BasisKind,
    CosineSeries,
    SineSeries,
    basis_matrix,
    project,
    wavenumbers,
)


@dataclass(frozen=True, eq=False)
class Field2D:
    """A field on [0, L] x (-1, 1) stored as x2-mode profiles theta_k(x1) on the x1 nodes."""

    modes: np.ndarray
    x1: np.ndarray
    kind: BasisKind = BasisKind.COSINE

    @classmethod
    def zeros(cls, kind: BasisKind, n_modes: int, x1: np.ndarray) -> "Field2D":
        return cls(np.zeros((n_modes, x1.size)), x1, kind)

    @classmethod
    def from_grid(cls, values: np.ndarray, x1: np.ndarray, x2: np.ndarray, kind: BasisKind, m: int) -> "Field2D":
        """Project grid values (n1, n2) row by row."""
        series = project(values, x2, kind, m)
        return cls(np.atleast_2d(series.coeffs).T.copy(), x1, kind)

    @property
    def n_modes(self) -> int:
        return self.modes.shape[0]

    @property
    def n1(self) -> int:
        return self.modes.shape[1]

    @property
    def h(self) -> float:
        return float(self.x1[1] - self.x1[0])

    def values(self, x2: np.ndarray, order2: int = 0) -> np.ndarray:
        return self.modes.T @ basis_matrix(self.kind, self.n_modes, x2, order2)

    def dx1(self, order: int = 1) -> "Field2D":
        out = self.modes
        for _ in range(order):
            out = np.gradient(out, self.x1, axis=1, edge_order=2)
        return Field2D(out, self.x1, self.kind)

    def trace(self, index: int):
        col = self.modes[:, index].copy()
        return CosineSeries(col) if self.kind is BasisKind.COSINE else SineSeries(col)

    def scaled(self, factor) -> "Field2D":
        return Field2D(self.modes * factor, self.x1, self.kind)

    def __add__(self, other: "Field2D") -> "Field2D":
        return Field2D(self.modes + other.modes, self.x1, self.kind)

    def __sub__(self, other: "Field2D") -> "Field2D":
        return Field2D(self.modes - other.modes, self.x1, self.kind)

    def l2_norm(self) -> float:
        # Parseval in x2, trapezoid in x1
        return float(np.sqrt(trapezoid(np.sum(self.modes ** 2, axis=0), self.x1)))

    def h1_norm(self) -> float:
        kappa = wavenumbers(self.kind, self.n_modes)[:, None]
        d1 = self.dx1().modes
        density = np.sum(self.modes ** 2 + d1 ** 2 + (kappa * self.modes) ** 2, axis=0)
        return float(np.sqrt(trapezoid(density, self.x1)))

    def c1_norm(self, x2: np.ndarray) -> float:
        """Sup of the field and its first partial derivatives over the grid."""
        return max(
            float(np.max(np.abs(self.values(x2)))),
            float(np.max(np.abs(self.dx1().values(x2)))),
            float(np.max(np.abs(self.values(x2, 1)))),
        )
