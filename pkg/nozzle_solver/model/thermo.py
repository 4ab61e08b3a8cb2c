"""Thermodynamic state functions shared by every other module.

All functions accept scalars or numpy arrays and broadcast.
"""
import numpy as np

from nozzle_solver.core.errors import NonPositiveArgument
from nozzle_solver.model.models import FlowState, GasParams


def sonic_density(gp: GasParams) -> float:
    return gp.rho_s


def enthalpy(gamma: float, rho, S):
    return gamma / (gamma - 1.0) * S * np.power(rho, gamma - 1.0)


def bernoulli(gamma: float, rho, speed, S):
    return 0.5 * np.square(speed) + enthalpy(gamma, rho, S)


def density_law(gamma: float, S, zeta):
    """Density H(S, zeta) recovered from the enthalpy value zeta.

    Raises:
        NonPositiveArgument: if zeta/S is not positive anywhere
    """
    ratio = np.asarray(zeta, dtype=float) / np.asarray(S, dtype=float)
    if np.any(~(ratio > 0.0)):
        raise NonPositiveArgument(
            "density law evaluated outside the physical branch (zeta/S <= 0)",
            value=float(np.min(ratio)),
        )
    out = np.power((gamma - 1.0) / gamma * ratio, 1.0 / (gamma - 1.0))
    return out if out.ndim else float(out)


def density_isentropic(gp: GasParams, z, q1, q2=0.0):
    """H0(z, q) = H(S0, z - |q|^2/2)."""
    return density_law(gp.gamma, gp.S0, z - 0.5 * (np.square(q1) + np.square(q2)))


def sound_speed_sq(gamma: float, z, q1, q2=0.0):
    c2 = (gamma - 1.0) * (np.asarray(z, dtype=float) - 0.5 * (np.square(q1) + np.square(q2)))
    if np.any(~(c2 > 0.0)):
        raise NonPositiveArgument(
            "sound speed undefined: z - |q|^2/2 <= 0",
            value=float(np.min(c2)),
        )
    return c2 if c2.ndim else float(c2)


def sound_speed(gamma: float, z, q1, q2=0.0):
    return np.sqrt(sound_speed_sq(gamma, z, q1, q2))


def pressure(S, rho, gamma: float):
    return S * np.power(rho, gamma)


def pseudo_bernoulli(state: FlowState):
    """K = B - Phi, identically zero for the flows computed here."""
    return bernoulli(state.gamma, state.rho, state.speed, state.S) - state.Phi


def velocity_denominator(gp: GasParams, rho):
    """gamma*S0*rho^(gamma-1) - J0^2/rho^2; negative exactly on the supersonic branch."""
    return gp.gamma * gp.S0 * np.power(rho, gp.gamma - 1.0) - gp.J0 ** 2 / np.square(rho)
