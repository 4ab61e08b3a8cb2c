"""Weighted energy identity of the linear problem.

For a solution (psi, Psi_hat) and a weight W(x1),

  I = int W psi_1 L1 - Psi_hat L2 = int W psi_1 f1_hat - Psi_hat f2_hat

and integrating by parts against the slip walls splits I into J1 + J2 + J3:

  J1 = int q1 psi_1^2 / 2 + q2 psi_2^2 / 2 + |grad Psi_hat|^2 + h1 Psi_hat^2
  J2 = int W psi_1 (b1 Psi_hat_1 + b2 Psi_hat) + h2 psi_1 Psi_hat + W (d2 a22) psi_1 psi_2
  J3 = int_{x1=L} W (psi_1^2 + a22 psi_2^2) / 2 - int_{x1=0} W (g1^2 + a22 psi_2^2) / 2

with q1 = -W' + 2 (a1 - d2 a12) W and q2 = -a22 W' - (d1 a22) W.

Both codings are evaluated on the mode profiles with the operators of the Galerkin solve:
x1 sums run over the interior nodes, where the discrete equations hold, and every
integration by parts in x1 is its exact summation-by-parts counterpart. Integration by
parts in x2 becomes the split of the coupling matrices into symmetric and antisymmetric
parts. I and J1 + J2 + J3 then agree to the accuracy of the linear solve.
"""
import numpy as np

from nozzle_solver.core.logger import setup_logger
from nozzle_solver.linsolve.models import EnergyReport, LinearProblem, LinearSolution
from nozzle_solver.multiplier.models import WeightFunction
from nozzle_solver.spectral import BasisKind, Field2D, wavenumbers

logger = setup_logger(__name__)


def _on_grid(w: WeightFunction, x1: np.ndarray) -> np.ndarray:
    if w.x1.size == x1.size and np.allclose(w.x1, x1, rtol=0.0, atol=1e-12):
        return w.W
    return np.interp(x1, w.x1, w.W)


def _form(u: np.ndarray, M: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Nodewise u_i^T M_i v_i for node-major profiles."""
    return np.einsum("ik,ikj,ij->i", u, M, v)


def _split(M: np.ndarray):
    sym = 0.5 * (M + np.swapaxes(M, 1, 2))
    return sym, M - sym


def energy_report(problem: LinearProblem, solution: LinearSolution, w: WeightFunction) -> EnergyReport:
    """
    Evaluate the weighted energy both from the forcing and from its integrated-by-parts form

    Args:
        problem (LinearProblem): Problem the solution belongs to
        solution (LinearSolution): Output of `solve_bvp`
        w (WeightFunction): Weight; interpolated onto the problem grid if sampled elsewhere

    Returns:
        EnergyReport: Both codings, their discrepancy relative to max(1, |I|), and the ratio
        ||(psi, Psi_hat)||_H1 / (||f1_hat|| + ||f2_hat|| + sup|g1|), or `trivial` for zero data
    """
    system = solution.system
    x1 = system.x1
    h = float(x1[1] - x1[0])
    W = _on_grid(w, x1)
    n_modes = system.m + 1
    last = x1.size - 1
    inner = slice(1, last)
    Wi = W[inner]

    # node-major profiles, shape (n1, m + 1)
    th, Th = solution.psi.modes.T, solution.Psi_hat.modes.T
    a = np.diff(th, axis=0) / h
    b = np.diff(Th, axis=0)
    d0_th = 0.5 * (a[1:] + a[:-1])
    d0_Th = (Th[2:] - Th[:-2]) / (2.0 * h)
    f1, f2 = system.f1.T[inner], system.f2.T[inner]

    direct = h * float(np.sum(Wi[:, None] * d0_th * f1 - Th[inner] * f2))

    eye = np.eye(n_modes)[None]
    drift = system.c12 + system.a1[:, None, None] * eye
    S, A = _split(W[:, None, None] * system.d22)
    kappa2 = wavenumbers(BasisKind.COSINE, n_modes) ** 2

    # psi_1 psi_11 and psi_1 (a22 psi_2)_2 terms by parts in x1
    sq = np.sum(a ** 2, axis=1)
    j1_psi = -0.5 * float(np.sum(np.diff(W[1:last]) * sq[1 : last - 1]))
    j1_psi += h * float(np.sum(Wi * _form(d0_th, _split(drift[inner])[0], d0_th)))
    j1_psi += 0.5 * float(np.sum(_form(th[2:last], S[1 : last - 1] - S[2:last], th[1 : last - 1])))
    # -Psi_hat Psi_hat_11 by parts; Psi_hat(L) = 0 puts the last cell in the interior sum
    j1_Psi = float(np.sum(b[1:] ** 2)) / h
    j1_Psi += h * float(np.sum((kappa2[None, :] + system.h1[inner, None]) * Th[inner] ** 2))
    j1 = j1_psi + j1_Psi

    j2 = h * float(
        np.sum(Wi[:, None] * d0_th * (system.b1[inner, None] * d0_Th + system.b2[inner, None] * Th[inner]))
    )
    j2 += h * float(np.sum(system.h2[inner, None] * Th[inner] * d0_th))
    j2 += h * float(np.sum(_form(d0_th, A[inner], th[inner])))

    outlet = float(0.5 * (W[last - 1] * sq[last - 1] + th[last] @ S[last - 1] @ th[last - 1]))
    outlet -= float(Th[last] @ b[last - 1]) / h
    inlet = float(0.5 * (W[1] * sq[0] + th[1] @ S[1] @ th[0]))
    inlet -= float(Th[1] @ b[0]) / h
    j3 = outlet - inlet

    report = EnergyReport(
        direct=direct,
        j1=j1,
        j2=j2,
        j3=j3,
        discrepancy=abs(direct - (j1 + j2 + j3)) / max(1.0, abs(direct)),
        terms={"outlet": outlet, "inlet": inlet},
    )

    g1 = problem.g1.padded(n_modes).evaluate(problem.x2)
    data_size = (
        Field2D(system.f1, x1).l2_norm() + Field2D(system.f2, x1).l2_norm() + float(np.max(np.abs(g1)))
    )
    if data_size == 0.0:
        report.trivial = True
    else:
        report.estimate_ratio = (solution.psi.h1_norm() + solution.Psi_hat.h1_norm()) / data_size
    logger.debug(
        f"Energy identity: direct={direct:.6e}, J1+J2+J3={report.decomposed:.6e}, "
        f"discrepancy={report.discrepancy:.3e}"
    )
    return report
