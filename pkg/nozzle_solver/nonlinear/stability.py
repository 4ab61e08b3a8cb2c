"""Measured stability constants and the empirical small-data threshold."""
from typing import Optional, Sequence, Tuple

import numpy as np

from nozzle_solver.background.models import Background1D
from nozzle_solver.core.errors import SolverError
from nozzle_solver.core.logger import setup_logger
from nozzle_solver.linearize import BarCoeffs
from nozzle_solver.linsolve import LinearProblem, solve_linear
from nozzle_solver.nonlinear.iteration import solve_irrotational
from nozzle_solver.nonlinear.models import BoundaryData, IterationConfig, StabilityBoundary
from nozzle_solver.nonlinear.transport import transport_solve
from nozzle_solver.spectral import BasisKind, CosineSeries, Field2D, x2_grid

logger = setup_logger(__name__)

DEFAULT_AMPLITUDES = (1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 1e-1)


def _unit_series(m: int) -> CosineSeries:
    coeffs = np.zeros(m + 1)
    coeffs[min(1, m)] = 1.0
    return CosineSeries(coeffs)


def measure_stability_constant(bg: Background1D, m: int, x2: Optional[np.ndarray] = None) -> Tuple[float, float]:
    """
    Probe solves for the linear constant C* and the transport constant C**

    C* is ||(psi, Psi_hat)||_H1 / (||f1|| + ||f2|| + sup|g1|) for unit data on the first
    cosine mode at background coefficients; C** is ||Y||_H1 / sup|S_en - S0| for the same
    inlet profile carried by the background momentum.

    Returns:
        (c_star, c_2star)
    """
    x2 = x2_grid() if x2 is None else x2
    bar = BarCoeffs.from_background(bg)
    x1 = bar.x1
    unit = _unit_series(m)
    forcing = Field2D(np.outer(unit.coeffs, np.ones(x1.size)), x1)
    problem = LinearProblem.at_background(bar, m, x2, f1=forcing, f2=forcing, g1=unit)
    solution = solve_linear(problem)
    data_size = forcing.l2_norm() * 2.0 + float(np.max(np.abs(unit.evaluate(x2))))
    c_star = (solution.psi.h1_norm() + solution.Psi_hat.h1_norm()) / data_size

    M1 = np.repeat((bar.rho * bar.u)[:, None], x2.size, axis=1)
    Y, _ = transport_solve((M1, np.zeros_like(M1)), unit, x1, x2, m)
    c_2star = Y.h1_norm() / float(np.max(np.abs(unit.evaluate(x2))))
    logger.info(f"Measured stability constants C*={c_star:.6g}, C**={c_2star:.6g}")
    return float(c_star), float(c_2star)


def configure_radii(
    bg: Background1D,
    data: BoundaryData,
    cfg: IterationConfig,
    x2: Optional[np.ndarray] = None,
) -> IterationConfig:
    """Attach measured constants and the nested radii sized by the data."""
    x2 = x2_grid() if x2 is None else x2
    c_star, c_2star = measure_stability_constant(bg, data.m, x2)
    sigma = data.sigma(x2, bg.grid)
    if sigma == 0.0:
        return cfg.model_copy(update={"sigma": 0.0, "c_star": c_star, "c_2star": c_2star})
    return cfg.with_radii(sigma, c_star, c_2star)


def empirical_stability_boundary(
    bg: Background1D,
    shape: BoundaryData,
    cfg: Optional[IterationConfig] = None,
    amplitudes: Sequence[float] = DEFAULT_AMPLITUDES,
    x2: Optional[np.ndarray] = None,
) -> StabilityBoundary:
    """
    Largest tried amplitude at which the irrotational iteration converges

    The data `shape` is scaled by each amplitude in increasing order; the sweep stops at
    the first failure. The result makes no claim about the theoretical threshold.
    """
    tried = []
    best = 0.0
    for amplitude in sorted(amplitudes):
        try:
            bundle = solve_irrotational(shape.scaled(amplitude), bg, cfg, x2)
        except SolverError as e:
            logger.info(f"amplitude {amplitude:g}: no convergence ({type(e).__name__})")
            tried.append((amplitude, False, 0))
            break
        tried.append((amplitude, True, bundle.diagnostics.iterations))
        best = amplitude
    logger.info(f"Empirical stability boundary {best:g}")
    return StabilityBoundary(amplitude=best, tried=tried)
