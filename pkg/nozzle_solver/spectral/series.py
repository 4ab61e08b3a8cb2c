"""Orthonormal x2 bases on (-1, 1) and the transforms between samples and coefficients.

Cosine basis (slip walls):  eta_0 = 1/sqrt(2), eta_k = cos(k pi x2)
Sine basis (Dirichlet walls): zeta_k = sin(k pi (x2 + 1) / 2), k >= 1
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np
from scipy.integrate import trapezoid

from nozzle_solver.core.config import get_settings
from nozzle_solver.core.errors import TruncationTooHigh

settings = get_settings()


class BasisKind(str, Enum):
    COSINE = "cosine"
    SINE = "sine"


def x2_grid(n2: Optional[int] = None) -> np.ndarray:
    return np.linspace(-1.0, 1.0, n2 or settings.DEFAULT_N2)


def wavenumbers(kind: BasisKind, n_modes: int) -> np.ndarray:
    if kind is BasisKind.COSINE:
        return np.pi * np.arange(n_modes)
    return 0.5 * np.pi * np.arange(1, n_modes + 1)


def basis_matrix(kind: BasisKind, n_modes: int, x2: np.ndarray, order: int = 0) -> np.ndarray:
    """Rows are the basis functions (or their order-th derivatives) sampled on x2."""
    kappa = wavenumbers(kind, n_modes)[:, None]
    shift = 0.5 * np.pi * order
    if kind is BasisKind.COSINE:
        rows = kappa ** order * np.cos(kappa * x2[None, :] + shift)
        rows[0] = 1.0 / np.sqrt(2.0) if order == 0 else 0.0
        return rows
    return kappa ** order * np.sin(kappa * (x2[None, :] + 1.0) + shift)


def quadrature_weights(x2: np.ndarray) -> np.ndarray:
    """Composite trapezoid weights; exact for basis products up to the resolvable truncation."""
    w = np.full(x2.size, x2[1] - x2[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def max_modes(n2: int) -> int:
    return (n2 - 1) // 4


def _check_truncation(n_modes: int, x2: np.ndarray) -> None:
    if n_modes - 1 > max_modes(x2.size):
        raise TruncationTooHigh(
            f"{n_modes} modes cannot be resolved on {x2.size} x2 nodes",
            limit=max_modes(x2.size),
        )


@dataclass(frozen=True, eq=False)
class _Series:
    coeffs: np.ndarray
    kind = BasisKind.COSINE

    @property
    def n_modes(self) -> int:
        return int(self.coeffs.size)

    def evaluate(self, x2: np.ndarray, order: int = 0) -> np.ndarray:
        return self.coeffs @ basis_matrix(self.kind, self.n_modes, np.asarray(x2, dtype=float), order)

    def scaled(self, factor: float):
        return type(self)(self.coeffs * factor)

    def padded(self, n_modes: int):
        out = np.zeros(n_modes)
        k = min(n_modes, self.n_modes)
        out[:k] = self.coeffs[:k]
        return type(self)(out)

    def __add__(self, other):
        n = max(self.n_modes, other.n_modes)
        return type(self)(self.padded(n).coeffs + other.padded(n).coeffs)

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def derivative(self, order: int, x2: Optional[np.ndarray] = None):
        """Even orders stay in the basis via the eigenrelation; odd orders are sampled on x2."""
        if order % 2 == 0:
            factor = (-(wavenumbers(self.kind, self.n_modes) ** 2)) ** (order // 2)
            return type(self)(self.coeffs * factor)
        if x2 is None:
            raise ValueError("odd-order derivatives leave the basis; pass x2 samples")
        return self.evaluate(x2, order)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


@dataclass(frozen=True, eq=False)
class CosineSeries(_Series):
    kind = BasisKind.COSINE

    @classmethod
    def zeros(cls, m: int) -> "CosineSeries":
        return cls(np.zeros(m + 1))

    @classmethod
    def constant(cls, value: float, m: int) -> "CosineSeries":
        coeffs = np.zeros(m + 1)
        coeffs[0] = np.sqrt(2.0) * value
        return cls(coeffs)


@dataclass(frozen=True, eq=False)
class SineSeries(_Series):
    kind = BasisKind.SINE

    @classmethod
    def zeros(cls, m: int) -> "SineSeries":
        return cls(np.zeros(m))

    def antiderivative(self, x2: np.ndarray) -> np.ndarray:
        """Integral from -1 to x2, vanishing at x2 = -1 exactly."""
        kappa = wavenumbers(BasisKind.SINE, self.n_modes)[:, None]
        rows = (1.0 - np.cos(kappa * (np.asarray(x2)[None, :] + 1.0))) / kappa
        return self.coeffs @ rows


Series = Union[CosineSeries, SineSeries]


def project(samples: np.ndarray, x2: np.ndarray, kind: BasisKind, m: int) -> Series:
    """
    Project samples on the x2 grid onto the first basis functions

    Args:
        samples (np.ndarray): Function values on x2 (last axis may be x2 for stacks)
        x2 (np.ndarray): Uniform grid on [-1, 1]
        kind (BasisKind): Cosine (indices 0..m) or sine (indices 1..m)
        m (int): Truncation index

    Returns:
        The coefficient series

    Raises:
        TruncationTooHigh: If m exceeds the modes the grid resolves
    """
    n_modes = m + 1 if kind is BasisKind.COSINE else m
    _check_truncation(n_modes, x2)
    coeffs = project_coefficients(samples, x2, kind, n_modes)
    return CosineSeries(coeffs) if kind is BasisKind.COSINE else SineSeries(coeffs)


def project_coefficients(samples: np.ndarray, x2: np.ndarray, kind: BasisKind, n_modes: int) -> np.ndarray:
    """Projection of samples (..., n2) onto n_modes basis functions, returning (..., n_modes)."""
    weighted = basis_matrix(kind, n_modes, x2) * quadrature_weights(x2)[None, :]
    return np.asarray(samples) @ weighted.T


def reconstruct(series: Series, x2: np.ndarray) -> np.ndarray:
    return series.evaluate(x2)


def integrate_x2(samples: np.ndarray, x2: np.ndarray) -> np.ndarray:
    return trapezoid(samples, x2, axis=-1)


def phi_en(v_en: SineSeries, x2: np.ndarray, m: int) -> CosineSeries:
    """Inlet potential trace phi_en(x2) = integral of v_en from -1, in the cosine basis."""
    return project(v_en.antiderivative(x2), x2, BasisKind.COSINE, m)
