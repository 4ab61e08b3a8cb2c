"""Entropy transport along the streamlines of a momentum field.

With w(x1, x2) = int_{-1}^{x2} M1(x1, y) dy the streamfunction of M, the inlet label of
the streamline through x is w0^{-1}(w(x)) where w0 = w(0, .). The entropy perturbation
is the inlet profile carried along: Y = (S_en - S0) o labels.
"""
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid
from scipy.interpolate import PchipInterpolator

from nozzle_solver.core.config import get_settings
from nozzle_solver.core.errors import DivergenceTooLarge, GridMismatch, NonMonotoneStream
from nozzle_solver.core.logger import setup_logger
from nozzle_solver.nonlinear.models import LagrangianMap
from nozzle_solver.spectral import BasisKind, CosineSeries, Field2D

settings = get_settings()
logger = setup_logger(__name__)


def streamfunction(M1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """Cumulative trapezoid of M1 across each x1 column, zero on the lower wall."""
    return cumulative_trapezoid(M1, x2, axis=1, initial=0.0)


def transport_solve(
    M: Tuple[np.ndarray, np.ndarray],
    dS_en: CosineSeries,
    x1: np.ndarray,
    x2: np.ndarray,
    m: Optional[int] = None,
    divergence_tol: Optional[float] = None,
) -> Tuple[Field2D, LagrangianMap]:
    """
    Carry the inlet entropy perturbation along the streamlines of M

    Args:
        M: Momentum components (M1, M2) sampled on the (n1, n2) grid
        dS_en (CosineSeries): Inlet entropy perturbation S_en - S0
        x1, x2 (np.ndarray): Grid abscissas
        m (int): Cosine truncation of the returned Y (that of dS_en by default)
        divergence_tol (float): Admissible relative drift of the wall-to-wall flux

    Returns:
        (Y, LagrangianMap): Y projected onto the cosine modes, and the labels with Y on the nodes

    Raises:
        GridMismatch: If M is not sampled on (x1, x2)
        NonMonotoneStream: If a column of the streamfunction is not strictly increasing
        DivergenceTooLarge: If the flux through the columns drifts beyond divergence_tol
    """
    M1 = np.asarray(M[0], dtype=float)
    if M1.shape != (x1.size, x2.size):
        raise GridMismatch(f"M1 is sampled on {M1.shape}, expected {(x1.size, x2.size)}", field="M1")
    tol = settings.DIVERGENCE_TOL if divergence_tol is None else divergence_tol
    m = dS_en.n_modes - 1 if m is None else m

    if np.any(M1 <= 0.0):
        bad = np.argwhere(M1 <= 0.0)[0]
        raise NonMonotoneStream(
            "horizontal momentum must stay positive for the streamlines to reach the inlet",
            x1=float(x1[bad[0]]),
            x2=float(x2[bad[1]]),
            value=float(M1[tuple(bad)]),
        )
    w = streamfunction(M1, x2)
    if np.any(np.diff(w, axis=1) <= 0.0):
        raise NonMonotoneStream("streamfunction is not strictly increasing across a column")

    total = w[:, -1]
    drift = float(np.max(np.abs(total - total[0])) / total[0])
    if drift > tol:
        raise DivergenceTooLarge(
            f"wall-to-wall flux drifts by {drift:.3e}, the streamfunction does not close", value=drift
        )
    # columns are rescaled onto the inlet flux so every label lands in [-1, 1]
    w = w * (total[0] / total)[:, None]

    inverse = PchipInterpolator(w[0], x2)
    labels = np.clip(inverse(w), -1.0, 1.0)
    entropy = dS_en.evaluate(labels.ravel()).reshape(labels.shape)
    logger.debug(f"Transported entropy over {x1.size}x{x2.size} nodes, flux drift {drift:.3e}")

    Y = Field2D.from_grid(entropy, x1, x2, BasisKind.COSINE, m)
    return Y, LagrangianMap(x1=x1, x2=x2, labels=labels, stream=w, entropy=entropy, flux_drift=drift)
