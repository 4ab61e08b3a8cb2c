"""Coefficients and right-hand sides of the irrotational linearization.

Arguments are perturbations around the background: z shifts the electric
potential, p its gradient, q the velocity-potential gradient. Every function
broadcasts over array-valued perturbations; pass `bar.column()` for grid
fields shaped (n1, n2).
"""
from typing import Callable, Tuple

import numpy as np

from nozzle_solver.core.config import get_settings
from nozzle_solver.core.errors import SonicDenominator
from nozzle_solver.linearize.models import BarCoeffs, PerturbationPoint
from nozzle_solver.model.thermo import density_law, sound_speed_sq

settings = get_settings()


def second_order_coeffs(gamma: float, z, q, c2_ref: float = 1.0) -> Tuple[np.ndarray, np.ndarray, Callable]:
    """
    Coefficients of the second-order part of the potential flow equation

    Args:
        gamma (float): Adiabatic constant
        z: Electric potential value (the Bernoulli slot)
        q: Velocity (q1, q2)
        c2_ref (float): Scale for the sonic-denominator guard

    Returns:
        (A12, A22, B) where B(p) = p.q / (c^2 - q1^2)

    Raises:
        SonicDenominator: If |c^2 - q1^2| falls below the guard
    """
    q1, q2 = q
    c2 = sound_speed_sq(gamma, z, q1, q2)
    beta = guard_sonic(c2 - np.square(q1), c2_ref)
    A12 = -q1 * q2 / beta
    A22 = (np.square(q2) - c2) / beta

    def B(p):
        return (p[0] * q1 + p[1] * q2) / beta

    return A12, A22, B


def guard_sonic(beta, c2_ref):
    if np.any(np.abs(beta) < settings.SONIC_DEN_TOL * np.max(c2_ref)):
        raise SonicDenominator(
            "state at the hyperbolic-degeneracy boundary (c^2 - u1^2 ~ 0)",
            value=float(np.min(np.abs(beta))),
        )
    return beta


def velocity(pt: PerturbationPoint, bar: BarCoeffs) -> Tuple[np.ndarray, np.ndarray]:
    """grad phi0 + q + r_perp."""
    return bar.u + pt.q[0] + pt.r_perp[0], pt.q[1] + pt.r_perp[1]


def local_sound_speed_sq(pt: PerturbationPoint, bar: BarCoeffs, u1, u2):
    """c^2 at Phi0 + z with velocity u, anchored on the sampled background c^2."""
    g = bar.gas.gamma
    return bar.c2 + (g - 1.0) * (pt.z - 0.5 * (np.square(u1) + np.square(u2) - np.square(bar.u)))


def irrotational_coeffs(pt: PerturbationPoint, bar: BarCoeffs):
    """(a12, a22) at the shifted state; r is ignored."""
    u1, u2 = bar.u + pt.q[0], pt.q[1]
    c2 = local_sound_speed_sq(pt, bar, u1, u2)
    beta = guard_sonic(c2 - np.square(u1), bar.c2)
    return -u1 * u2 / beta, (np.square(u2) - c2) / beta


def rhs_f1(pt: PerturbationPoint, bar: BarCoeffs):
    """Quadratic remainder of B around the background, minus sign included.

    With P = grad Phi . u and beta = c^2 - u1^2 split into background,
    linear and quadratic parts, f1 = -(N2 beta_bar - N1 dbeta) / (beta beta_bar^2).
    """
    g = bar.gas.gamma
    z, (p1, p2), (q1, q2) = pt.z, pt.p, pt.q
    P_bar = bar.E * bar.u
    dP_lin = bar.E * q1 + bar.u * p1
    dP_quad = p1 * q1 + p2 * q2
    dbeta_lin = (g - 1.0) * (z - bar.u * q1) - 2.0 * bar.u * q1
    dbeta_quad = -0.5 * (g - 1.0) * (np.square(q1) + np.square(q2)) - np.square(q1)
    dbeta = dbeta_lin + dbeta_quad
    beta = guard_sonic(bar.beta_bar + dbeta, bar.c2)
    N1 = dP_lin * bar.beta_bar - P_bar * dbeta_lin
    N2 = dP_quad * bar.beta_bar - P_bar * dbeta_quad
    return -(N2 * bar.beta_bar - N1 * dbeta) / (beta * np.square(bar.beta_bar))


def rhs_f1_literal(pt: PerturbationPoint, bar: BarCoeffs):
    """(B_bar + a1 q1 + b1 p1 + b2 z) - B at the shifted arguments."""
    u1, u2 = bar.u + pt.q[0], pt.q[1]
    c2 = local_sound_speed_sq(pt, bar, u1, u2)
    beta = guard_sonic(c2 - np.square(u1), bar.c2)
    B = ((bar.E + pt.p[0]) * u1 + pt.p[1] * u2) / beta
    return bar.B_bar + bar.a1 * pt.q[0] + bar.b1 * pt.p[0] + bar.b2 * pt.z - B


def shifted_density(pt: PerturbationPoint, bar: BarCoeffs, u1, u2, S=None):
    g = bar.gas.gamma
    c2 = local_sound_speed_sq(pt, bar, u1, u2)
    return density_law(g, bar.gas.S0 if S is None else S, c2 / (g - 1.0))


def rhs_f2(pt: PerturbationPoint, bar: BarCoeffs, b_delta=0.0):
    """
    Right-hand side of the linearized Poisson equation

    Args:
        pt (PerturbationPoint): Perturbation arguments (z, q)
        bar (BarCoeffs): Background coefficients broadcasting against pt
        b_delta: b - b0 at the same points

    Raises:
        NonPositiveArgument: If the shifted state leaves the density law's domain
    """
    u1, u2 = bar.u + pt.q[0], pt.q[1]
    H = shifted_density(pt, bar, u1, u2)
    return H - bar.rho - bar.h1 * pt.z - bar.h2 * pt.q[0] - b_delta
