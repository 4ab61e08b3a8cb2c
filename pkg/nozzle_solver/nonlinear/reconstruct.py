"""Physical fields behind a set of perturbations and the residuals of the full system.

The residuals are evaluated from the reconstructed grid fields with their own
difference operators (second-order in x1, spectral in x2), independently of the
Galerkin discretization that produced the perturbations.
"""
from typing import Dict, Optional

import numpy as np
from scipy.integrate import trapezoid

from nozzle_solver.core.logger import setup_logger
from nozzle_solver.linearize import BarCoeffs, PerturbationPoint, local_sound_speed_sq, shifted_density, velocity
from nozzle_solver.model.thermo import enthalpy, pressure
from nozzle_solver.nonlinear.models import BoundaryData, Diagnostics, LagrangianMap
from nozzle_solver.spectral import BasisKind, Field2D, basis_matrix, project_coefficients

logger = setup_logger(__name__)


def perturbation_point(psi: Field2D, Psi: Field2D, phi: Field2D, Y: Field2D, x2: np.ndarray) -> PerturbationPoint:
    """Sample the iterate and its derivatives on the grid."""
    d1_phi = phi.dx1()
    phi_11 = phi.dx1(2).values(x2)
    phi_12 = d1_phi.values(x2, 1)
    phi_22 = phi.values(x2, 2)
    return PerturbationPoint(
        z=Psi.values(x2),
        p=(Psi.dx1().values(x2), Psi.values(x2, 1)),
        q=(psi.dx1().values(x2), psi.values(x2, 1)),
        r=(d1_phi.values(x2), phi.values(x2, 1)),
        xi=Y.values(x2),
        xi_x1=Y.dx1().values(x2),
        eta=Y.values(x2, 1),
        M2x2=((phi_12, -phi_11), (phi_22, -phi_12)),
    )


def d_x1(values: np.ndarray, x1: np.ndarray) -> np.ndarray:
    return np.gradient(values, x1, axis=0, edge_order=2)


def d_x2(values: np.ndarray, x2: np.ndarray, kind: BasisKind) -> np.ndarray:
    """Spectral x2 derivative of grid values that are even (cosine) or vanish on the walls (sine)."""
    n_modes = (x2.size - 1) // 2 if kind is BasisKind.COSINE else x2.size - 2
    coeffs = project_coefficients(values, x2, kind, n_modes)
    return coeffs @ basis_matrix(kind, n_modes, x2, order=1)


def second_difference(values: np.ndarray, h: float) -> np.ndarray:
    """Three-point second difference along x1, four-point one-sided at both ends."""
    out = np.empty_like(values)
    out[1:-1] = (values[2:] - 2.0 * values[1:-1] + values[:-2]) / h ** 2
    out[0] = (2.0 * values[0] - 5.0 * values[1] + 4.0 * values[2] - values[3]) / h ** 2
    out[-1] = (2.0 * values[-1] - 5.0 * values[-2] + 4.0 * values[-3] - values[-4]) / h ** 2
    return out


def grid_l2(values: np.ndarray, x1: np.ndarray, x2: np.ndarray) -> float:
    return float(np.sqrt(trapezoid(trapezoid(np.square(values), x2, axis=1), x1)))


def reconstruct(
    psi: Field2D,
    Psi: Field2D,
    phi: Field2D,
    Y: Field2D,
    x2: np.ndarray,
    bar: BarCoeffs,
    transport: Optional[LagrangianMap] = None,
) -> Dict[str, np.ndarray]:
    """
    Physical fields on the (n1, n2) grid

    u = grad(phi0 + psi) + (phi_x2, -phi_x1), S = S0 + Y (the transported nodal values when
    a Lagrangian map is given), rho = H(S, Phi - |u|^2 / 2), p = S rho^gamma, K = B - Phi,
    and the vorticity both as the discrete curl of u and as -Laplacian(phi).

    Raises:
        NonPositiveArgument: If the density law leaves its domain
    """
    gp = bar.gas
    col = bar.column()
    x1 = psi.x1
    pt = perturbation_point(psi, Psi, phi, Y, x2)
    u1, u2 = velocity(pt, col)
    u1 = np.broadcast_to(u1, (x1.size, x2.size)).copy()
    u2 = np.broadcast_to(u2, (x1.size, x2.size)).copy()
    Y_nodes = transport.entropy if transport is not None else pt.xi
    S = gp.S0 + np.broadcast_to(Y_nodes, u1.shape)
    rho = shifted_density(pt, col, u1, u2, S=S)
    Phi = col.Phi0 + pt.z
    speed2 = np.square(u1) + np.square(u2)
    c2 = local_sound_speed_sq(pt, col, u1, u2)
    K = 0.5 * speed2 + enthalpy(gp.gamma, rho, S) - Phi

    omega_curl = d_x1(u2, x1) - d_x2(u1, x2, BasisKind.COSINE)
    omega_phi = -(phi.dx1(2).values(x2) + phi.values(x2, 2))
    return {
        "u1": u1,
        "u2": u2,
        "rho": rho,
        "p": pressure(S, rho, gp.gamma),
        "S": S,
        "Phi": np.broadcast_to(Phi, u1.shape).copy(),
        "K": K,
        "c2": c2,
        "omega_curl": omega_curl,
        "omega_phi": omega_phi,
    }


def residuals(
    fields: Dict[str, np.ndarray],
    Psi: Field2D,
    x2: np.ndarray,
    bar: BarCoeffs,
    data: BoundaryData,
) -> Diagnostics:
    """Residual norms, invariant drifts and margins of reconstructed fields."""
    gp = bar.gas
    x1 = bar.x1
    rho, u1, u2, S = fields["rho"], fields["u1"], fields["u2"], fields["S"]
    M1, M2 = rho * u1, rho * u2

    continuity = d_x1(M1, x1) + d_x2(M2, x2, BasisKind.SINE)

    Psi_nodes = Psi.values(x2)
    laplacian = second_difference(Psi_nodes, float(x1[1] - x1[0])) + Psi.values(x2, 2)
    # Phi0'' = rho_bar - b0 holds for the background exactly
    poisson = laplacian - (rho - bar.rho[:, None]) + data.b_delta(x1, x2)

    S_x2 = d_x2(S, x2, BasisKind.COSINE)
    vorticity = fields["omega_curl"] - np.power(rho, gp.gamma - 1.0) * S_x2 / ((gp.gamma - 1.0) * u1)
    transport = M1 * d_x1(S, x1) + M2 * S_x2

    flux = trapezoid(M1, x2, axis=1)
    margin = np.square(u1) + np.square(u2) - fields["c2"]

    diagnostics = Diagnostics(
        potential_residual=grid_l2(continuity, x1, x2),
        poisson_residual=grid_l2(poisson, x1, x2),
        vorticity_residual=grid_l2(vorticity, x1, x2),
        vorticity_consistency=grid_l2(fields["omega_curl"] - fields["omega_phi"], x1, x2),
        transport_residual=grid_l2(transport, x1, x2),
        mass_flux_drift=float(np.max(np.abs(flux - flux[0])) / abs(flux[0])),
        max_pseudo_bernoulli=float(np.max(np.abs(fields["K"]))),
        supersonic_margin=float(np.min(margin)),
        background_margin=float(np.min(np.square(bar.u) - bar.c2)),
        min_u1=float(np.min(u1)),
        min_rho=float(np.min(rho)),
    )
    logger.debug(
        f"Residuals: continuity={diagnostics.potential_residual:.3e}, poisson={diagnostics.poisson_residual:.3e}, "
        f"vorticity={diagnostics.vorticity_residual:.3e}, margin={diagnostics.supersonic_margin:.4g}"
    )
    return diagnostics
