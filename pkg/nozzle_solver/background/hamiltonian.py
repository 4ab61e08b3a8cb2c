"""First integral of the background system and its desingularised sonic field."""
import numpy as np
from scipy.integrate import quad

from nozzle_solver.model.models import GasParams

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(32)
# mapped to [0, 1]
_T = 0.5 * (_GAUSS_NODES + 1.0)
_W = 0.5 * _GAUSS_WEIGHTS


def _antiderivative(gp: GasParams, t):
    g, S0, b0, J2 = gp.gamma, gp.S0, gp.b0, gp.J0 ** 2
    return (
        S0 * np.power(t, g)
        - g * S0 * b0 * np.power(t, g - 1.0) / (g - 1.0)
        + J2 / t
        - 0.5 * J2 * b0 / np.square(t)
    )


def hamiltonian_integrand(gp: GasParams, t):
    g = gp.gamma
    return (t - gp.b0) / t * (g * gp.S0 * np.power(t, g - 1.0) - gp.J0 ** 2 / np.square(t))


def hamiltonian(gp: GasParams, rho):
    """H(rho) = integral of the integrand from rho_s to rho, via the exact antiderivative."""
    rho = np.asarray(rho, dtype=float)
    out = _antiderivative(gp, rho) - _antiderivative(gp, gp.rho_s)
    return out if out.ndim else float(out)


def hamiltonian_quad(gp: GasParams, rho: float) -> float:
    """Adaptive-quadrature cross-check of hamiltonian()."""
    value, _ = quad(lambda t: hamiltonian_integrand(gp, t), gp.rho_s, rho, epsabs=1e-14, epsrel=1e-13, limit=200)
    return value


def hamiltonian_second_derivative(gp: GasParams, rho):
    g, S0, b0, rs = gp.gamma, gp.S0, gp.b0, gp.rho_s
    rho = np.asarray(rho, dtype=float)
    return g * S0 / rho ** 3 * (
        (np.power(rho, g + 1.0) - rs ** (g + 1.0)) * (1.0 - 3.0 * (rho - b0) / rho)
        + (g + 1.0) * (rho - b0) * np.power(rho, g)
    )


def desingularized_field(gp: GasParams, rho: float) -> float:
    """F(rho) with rho' = -F on the upper separatrix branch and +F on the lower one.

    Both averaged integrals are evaluated by tensor Gauss-Legendre quadrature, so
    F stays finite at rho = rho_s where the raw field is 0/0.
    """
    g, rs = gp.gamma, gp.rho_s
    s = np.outer(_T, _T)
    inner = _T[:, None] * hamiltonian_second_derivative(gp, s * rho + (1.0 - s) * rs)
    double_avg = float(_W @ inner @ _W)
    single_avg = float(_W @ np.power(_T * rho + (1.0 - _T) * rs, g))
    return rho ** 3 * np.sqrt(2.0 * max(double_avg, 0.0)) / (g * (g + 1.0) * gp.S0 * single_avg)


def orbit_field(gp: GasParams, rho: float, discriminant: float, sign: float) -> float:
    """E on the level set 1/2 E^2 - H(rho) = discriminant, on the branch with the given sign."""
    return sign * np.sqrt(max(2.0 * (discriminant + hamiltonian(gp, rho)), 0.0))
