"""Coefficients and sources of the rotational (Helmholtz-decomposed) system.

The velocity is u = grad(phi0 + psi) + (phi_x2, -phi_x1); with that sign
curl u = -Laplacian(phi), so the stream potential solves Laplacian(phi) = f3.
"""
import numpy as np

from nozzle_solver.core.config import get_settings
from nozzle_solver.core.errors import InadmissibleRadius, StagnationDenominator
from nozzle_solver.core.logger import setup_logger
from nozzle_solver.linearize.coefficients import guard_sonic, local_sound_speed_sq, shifted_density, velocity
from nozzle_solver.linearize.models import AdmissibilityReport, BarCoeffs, PerturbationPoint

settings = get_settings()
logger = setup_logger(__name__)


def rotational_coeffs(pt: PerturbationPoint, bar: BarCoeffs):
    """
    Extended second-order coefficients, momentum and hyperbolicity function

    Returns:
        (a12, a22, M, beta) with M = H(S0 + xi, Phi - |u|^2/2) u as a pair of arrays

    Raises:
        SonicDenominator: If |beta| falls below the guard
    """
    u1, u2 = velocity(pt, bar)
    c2 = local_sound_speed_sq(pt, bar, u1, u2)
    beta = guard_sonic(c2 - np.square(u1), bar.c2)
    H = shifted_density(pt, bar, u1, u2, S=bar.gas.S0 + pt.xi)
    return -u1 * u2 / beta, (np.square(u2) - c2) / beta, (H * u1, H * u2), beta


def rotational_rhs(pt: PerturbationPoint, bar: BarCoeffs, b_delta=0.0):
    """
    Sources (f1, f2, f3) of the rotational iteration

    f1 moves the full non-divergence residual, including the vorticity and
    entropy-gradient terms, to the right of the linear operator; f2 is the
    Poisson remainder at the local entropy; f3 is the vorticity source.

    Raises:
        SonicDenominator: If |beta| falls below the guard
        StagnationDenominator: If u1 = u_bar + q1 + r2 nearly vanishes
    """
    g, S0 = bar.gas.gamma, bar.gas.S0
    u1, u2 = velocity(pt, bar)
    if np.any(np.abs(u1) < settings.SONIC_DEN_TOL * np.max(np.abs(bar.u))):
        raise StagnationDenominator("axial velocity vanishes", value=float(np.min(np.abs(u1))))
    c2 = local_sound_speed_sq(pt, bar, u1, u2)
    beta = guard_sonic(c2 - np.square(u1), bar.c2)
    S = S0 + pt.xi
    H = shifted_density(pt, bar, u1, u2, S=S)

    grad_Phi = (bar.E + pt.p[0], pt.p[1])
    G = (
        u1 * grad_Phi[0]
        + u2 * grad_Phi[1]
        - pt.hessian_term(u1, u2)
        - c2 * (u1 * pt.xi_x1 + u2 * pt.eta) / ((g - 1.0) * S)
    )
    f1 = bar.a1 * pt.q[0] + bar.b1 * pt.p[0] + bar.b2 * pt.z + bar.B_bar - G / beta
    f2 = H - bar.rho - bar.h1 * pt.z - bar.h2 * pt.q[0] - b_delta
    f3 = -pt.eta * np.power(H, g - 1.0) / ((g - 1.0) * u1)
    return f1, f2, f3


def _box(delta: float, samples: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    corners = np.array(np.meshgrid(*[[-1.0, 1.0]] * 5, indexing="ij")).reshape(5, -1)
    return delta * np.concatenate([corners, rng.uniform(-1.0, 1.0, size=(5, samples))], axis=1)


def _supersonic(box: np.ndarray, col: BarCoeffs) -> bool:
    """Every sample keeps c^2 > 0 and stays strictly on the supersonic side of the sonic guard."""
    z, q1, q2, r1, r2 = (row[None, :] for row in box)
    pt = PerturbationPoint(z=z, q=(q1, q2), r=(r1, r2))
    u1, u2 = velocity(pt, col)
    c2 = local_sound_speed_sq(pt, col, u1, u2)
    beta = c2 - np.square(u1)
    return bool(np.all(c2 > 0.0) and np.all(beta < -settings.SONIC_DEN_TOL * np.max(col.c2)))


def admissibility_constants(bar: BarCoeffs, delta: float, samples: int = 64, seed: int = 0) -> AdmissibilityReport:
    """
    Measure the hyperbolicity margin kappa0 and the ellipticity bound kappa1

    Samples |z|, |q|, |r| <= delta (box corners included) at every x1 node and
    reports min(u1^2 - c^2) and min a22, plus the largest |a12| seen on
    wall-compatible samples (q2 = r1 = 0).

    Raises:
        InadmissibleRadius: If some sample reaches vacuum (c^2 <= 0) or the sonic
            guard; the error carries the largest radius whose box stays supersonic
    """
    box = _box(delta, samples, seed)
    col = bar.column()
    if not _supersonic(box, col):
        low, high = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (low + high)
            low, high = (mid, high) if _supersonic(mid * box, col) else (low, mid)
        raise InadmissibleRadius(
            f"perturbation box of radius {delta:.6g} leaves the supersonic branch",
            delta=delta,
            feasible=low * delta,
        )
    z, q1, q2, r1, r2 = (row[None, :] for row in box)
    pt = PerturbationPoint(z=z, q=(q1, q2), r=(r1, r2))
    _, a22, _, beta = rotational_coeffs(pt, col)
    wall = PerturbationPoint(z=z, q=(q1, 0.0 * q2), r=(0.0 * r1, r2))
    a12_wall, _, _, _ = rotational_coeffs(wall, col)
    report = AdmissibilityReport(
        delta=delta,
        kappa0=float(np.min(-beta)),
        kappa1=float(np.min(a22)),
        samples=int(box.shape[1] * bar.x1.size),
        wall_a12=float(np.max(np.abs(a12_wall))),
    )
    logger.debug(f"admissibility box delta={delta:g}: kappa0={report.kappa0:.4g}, kappa1={report.kappa1:.4g}")
    return report
