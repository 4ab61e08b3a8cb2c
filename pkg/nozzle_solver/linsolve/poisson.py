import numpy as np
from scipy.linalg import solve_banded

from nozzle_solver.core.errors import GridMismatch
from nozzle_solver.core.logger import setup_logger
from nozzle_solver.spectral import BasisKind, Field2D, wavenumbers

logger = setup_logger(__name__)


def modal_tridiagonal(shift, h: float, rhs: np.ndarray) -> np.ndarray:
    """
    Solve Theta'' - shift * Theta = rhs on nodes 0..n with Theta'(0) = 0 and Theta(x_n) = 0

    The Neumann end uses the reflected ghost node, the Dirichlet end is eliminated, so the
    system stays tridiagonal. `rhs` holds the values at nodes 0..n-1; `shift` may be a
    scalar or a profile on those nodes.

    Returns:
        np.ndarray: Theta on nodes 0..n (last entry zero)
    """
    n = rhs.size
    inv_h2 = 1.0 / h ** 2
    ab = np.zeros((3, n))
    ab[0, 1:] = inv_h2
    ab[0, 1] = 2.0 * inv_h2
    ab[1, :] = -2.0 * inv_h2 - np.broadcast_to(shift, (n,))
    ab[2, :-1] = inv_h2
    out = np.zeros(n + 1)
    out[:n] = solve_banded((1, 1), ab, rhs)
    return out


def solve_poisson_phi(f3: Field2D) -> Field2D:
    """
    Stream potential from its vorticity source: Delta phi = f3 with phi_x1 = 0 at the inlet
    and phi = 0 on the walls and the outlet

    Each sine mode solves Theta'' - (k pi / 2)^2 Theta = f_k, which is negative definite.

    Args:
        f3 (Field2D): Source in the sine basis

    Returns:
        Field2D: phi in the sine basis on the same x1 grid
    """
    if f3.kind is not BasisKind.SINE:
        raise GridMismatch("the stream potential lives in the sine basis", kind=f3.kind.value)
    h = f3.h
    last = f3.n1 - 1
    kappa = wavenumbers(BasisKind.SINE, f3.n_modes)
    out = np.zeros_like(f3.modes)
    for k, wavenumber in enumerate(kappa):
        out[k] = modal_tridiagonal(wavenumber ** 2, h, f3.modes[k, :last])
    logger.debug(f"Solved {f3.n_modes} stream-potential modes on {f3.n1} nodes")
    return Field2D(out, f3.x1, BasisKind.SINE)
