"""Galerkin reduction of the linear (psi, Psi) problem and its global finite-difference solve.

Each unknown is expanded in the cosine basis, psi = sum theta_k(x1) eta_k(x2) and
Psi_hat = sum Theta_k(x1) eta_k(x2), which turns the 2D problem into the coupled system

  theta_k'' + sum_j (c12_kj + a1 d_kj) theta_j' + sum_j d22_kj theta_j + b1 Theta_k' + b2 Theta_k = f1_k
  Theta_k'' - (k pi)^2 Theta_k - h1 Theta_k - h2 theta_k'                                         = f2_k

with theta_k(0) = psi0_k, theta_k'(0) = g1_k, Theta_k'(0) = 0 and Theta_k(L) = 0.
All modes are discretized at once with centered second-order differences in x1 and
factorized by sparse LU, so the elliptic modes never have to be shot across the nozzle.
"""
from typing import Optional

import numpy as np
import pandas as pd
from scipy import sparse
from scipy.sparse.linalg import LinearOperator, onenormest, splu
from scipy.sparse.linalg import norm as sparse_norm

from nozzle_solver.core.config import get_settings
from nozzle_solver.core.errors import GridMismatch, ResidualTooLarge, SingularSystem, TruncationTooHigh
from nozzle_solver.core.logger import setup_logger
from nozzle_solver.linsolve.models import LinearProblem, LinearSolution, ModeSystem
from nozzle_solver.spectral import BasisKind, Field2D, basis_matrix, max_modes, quadrature_weights, wavenumbers

settings = get_settings()
logger = setup_logger(__name__)

# one-sided second-order first derivative at the left end
_ONE_SIDED = ((0, -3.0), (1, 4.0), (2, -1.0))


def _check_grids(problem: LinearProblem) -> None:
    expected = (problem.n1, problem.x2.size)
    for name in ("a12", "a22"):
        shape = getattr(problem, name).shape
        if shape != expected:
            raise GridMismatch(f"{name} is sampled on {shape}, expected {expected}", field=name)
    for name in ("f1", "f2"):
        f = getattr(problem, name)
        if f.n1 != problem.n1 or not np.allclose(f.x1, problem.x1, rtol=0.0, atol=1e-12):
            raise GridMismatch(f"{name} lives on a different x1 grid", field=name)
    if problem.n1 < 3:
        raise GridMismatch("the x1 grid needs at least three nodes", n1=problem.n1)
    if problem.m > max_modes(problem.x2.size):
        raise TruncationTooHigh(
            f"m={problem.m} cannot be resolved on {problem.x2.size} x2 nodes", limit=max_modes(problem.x2.size)
        )


def _mode_block(f: Field2D, n_modes: int) -> np.ndarray:
    out = np.zeros((n_modes, f.n1))
    k = min(n_modes, f.n_modes)
    out[:k] = f.modes[:k]
    return out


def mode_couplings(problem: LinearProblem):
    """Projections c12[i, k, j] = 2 <a12 eta_j', eta_k> and d22[i, k, j] = (j pi)^2 <a22 eta_j, eta_k>."""
    n_modes = problem.m + 1
    x2 = problem.x2
    w = quadrature_weights(x2)
    eta = basis_matrix(BasisKind.COSINE, n_modes, x2)
    d_eta = basis_matrix(BasisKind.COSINE, n_modes, x2, order=1)
    c12 = 2.0 * np.einsum("iq,jq,kq->ikj", problem.a12 * w, d_eta, eta, optimize=True)
    kappa2 = wavenumbers(BasisKind.COSINE, n_modes) ** 2
    d22 = np.einsum("iq,jq,kq->ikj", problem.a22 * w, eta, eta, optimize=True) * kappa2[None, None, :]
    return c12, d22


def _system_matrix(m, h, c12, d22, a1, b1, b2, h1, h2) -> sparse.csc_matrix:
    n_modes = m + 1
    n1 = c12.shape[0]
    last = n1 - 1
    stride = 2 * n_modes
    inv_h2 = 1.0 / h ** 2
    rows, cols, vals = [], [], []

    def theta(i, k):
        return i * stride + k

    def Theta(i, k):
        return i * stride + n_modes + k

    def put(r, c, v):
        r, c, v = np.broadcast_arrays(r, c, v)
        rows.append(r.ravel())
        cols.append(c.ravel())
        vals.append(np.asarray(v, dtype=float).ravel())

    k = np.arange(n_modes)
    node = np.arange(1, last)[:, None]
    inner = slice(1, last)

    # psi equation at node i sits in row theta(i + 1, k); rows theta(0, .) and theta(1, .)
    # carry the two inlet conditions
    row = theta(node + 1, k)
    put(row, theta(node - 1, k), inv_h2)
    put(row, theta(node, k), -2.0 * inv_h2)
    put(row, theta(node + 1, k), inv_h2)

    drift = c12[inner] + a1[inner, None, None] * np.eye(n_modes)[None]
    ii = node[:, :, None]
    coupled_row = theta(ii + 1, k[None, :, None])
    j = k[None, None, :]
    put(coupled_row, theta(ii + 1, j), drift / (2.0 * h))
    put(coupled_row, theta(ii - 1, j), -drift / (2.0 * h))
    put(coupled_row, theta(ii, j), d22[inner])

    b1i, b2i = b1[inner, None], b2[inner, None]
    put(row, Theta(node + 1, k), b1i / (2.0 * h))
    put(row, Theta(node - 1, k), -b1i / (2.0 * h))
    put(row, Theta(node, k), b2i)

    # boundary rows are scaled to the 1/h^2 magnitude of the interior rows
    put(theta(0, k), theta(0, k), inv_h2)
    for offset, weight in _ONE_SIDED:
        put(theta(1, k), theta(offset, k), weight / (2.0 * h ** 2))

    row = Theta(node, k)
    kappa2 = wavenumbers(BasisKind.COSINE, n_modes) ** 2
    put(row, Theta(node - 1, k), inv_h2)
    put(row, Theta(node, k), -2.0 * inv_h2 - kappa2[None, :] - h1[inner, None])
    put(row, Theta(node + 1, k), inv_h2)
    h2i = h2[inner, None]
    put(row, theta(node + 1, k), -h2i / (2.0 * h))
    put(row, theta(node - 1, k), h2i / (2.0 * h))

    for offset, weight in _ONE_SIDED:
        put(Theta(0, k), Theta(offset, k), weight / (2.0 * h ** 2))
    put(Theta(last, k), Theta(last, k), inv_h2)

    size = stride * n1
    matrix = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(size, size)
    ).tocsc()
    matrix.eliminate_zeros()
    return matrix


def assemble(problem: LinearProblem) -> ModeSystem:
    """
    Project the frozen-coefficient problem onto the cosine modes and build the discrete system

    The boundary lift Psi_bd = (x1 - L) g2 + psi_ex is removed first, so the assembled forcing is
    f1 - L1(0, Psi_bd) and f2 - L2(0, Psi_bd) and Psi_hat carries homogeneous conditions.

    Args:
        problem (LinearProblem): Coefficients, forcing and boundary series

    Returns:
        ModeSystem: Couplings, homogenized forcing, the sparse matrix and its right-hand side

    Raises:
        GridMismatch: If coefficients or forcing are sampled on different grids
        TruncationTooHigh: If m exceeds what the x2 grid resolves
    """
    _check_grids(problem)
    bar = problem.bar
    m = problem.m
    n_modes = m + 1
    x1 = problem.x1
    h = float(x1[1] - x1[0])
    logger.debug(f"Assembling mode system n1={problem.n1}, m={m}, L={problem.L:.6g}")

    c12, d22 = mode_couplings(problem)

    lift = problem.boundary_lift()
    g2 = problem.g2.padded(n_modes).coeffs[:, None]
    kappa2 = wavenumbers(BasisKind.COSINE, n_modes)[:, None] ** 2
    f1 = _mode_block(problem.f1, n_modes) - (bar.b1 * g2 + bar.b2 * lift.modes)
    f2 = _mode_block(problem.f2, n_modes) + (kappa2 + bar.h1) * lift.modes

    g1 = problem.g1.padded(n_modes).coeffs
    psi0 = problem.inlet_trace.padded(n_modes).coeffs

    matrix = _system_matrix(m, h, c12, d22, bar.a1, bar.b1, bar.b2, bar.h1, bar.h2)

    last = problem.n1 - 1
    rhs = np.zeros(matrix.shape[0])
    blocks = rhs.reshape(problem.n1, 2, n_modes)
    blocks[0, 0] = psi0 / h ** 2
    blocks[1, 0] = g1 / h
    blocks[2:, 0] = f1[:, 1:last].T
    blocks[1:last, 1] = f2[:, 1:last].T

    return ModeSystem(
        m=m,
        x1=x1,
        c12=c12,
        d22=d22,
        a1=bar.a1,
        b1=bar.b1,
        b2=bar.b2,
        h1=bar.h1,
        h2=bar.h2,
        f1=f1,
        f2=f2,
        g1=g1,
        psi0=psi0,
        psi_bd=lift,
        matrix=matrix,
        rhs=rhs,
    )


def relative_residual(system: ModeSystem, state: np.ndarray) -> float:
    """Discrete L2 norm of A x - b relative to b (absolute when b vanishes)."""
    residual = np.linalg.norm(system.matrix @ state - system.rhs)
    scale = np.linalg.norm(system.rhs)
    return float(residual / scale) if scale > 0.0 else float(residual)


def _factorize(system: ModeSystem):
    try:
        return splu(system.matrix)
    except RuntimeError as e:
        raise SingularSystem(
            f"the discrete operator is singular; is L beyond the critical length? ({e})",
            n1=system.n1,
            m=system.m,
        ) from e


def solve_bvp(system: ModeSystem, residual_tol: Optional[float] = None) -> LinearSolution:
    """
    Solve the assembled two-point problem for all modes at once

    Args:
        system (ModeSystem): Output of `assemble`
        residual_tol (float): Admissible relative residual (settings.RESIDUAL_TOL by default)

    Returns:
        LinearSolution: psi, Psi_hat and Psi = Psi_hat + Psi_bd as cosine fields

    Raises:
        SingularSystem: If the factorization breaks down or returns non-finite values
        ResidualTooLarge: If the solve does not reproduce the right-hand side
    """
    tol = residual_tol if residual_tol is not None else settings.RESIDUAL_TOL
    logger.info(f"Solving linear problem with {system.size} unknowns (n1={system.n1}, m={system.m})")
    lu = _factorize(system)
    state = lu.solve(system.rhs)
    if not np.all(np.isfinite(state)):
        raise SingularSystem("the solve produced non-finite mode profiles", n1=system.n1, m=system.m)

    residual = relative_residual(system, state)
    if residual > tol:
        raise ResidualTooLarge(f"relative residual {residual:.3e} exceeds {tol:.1e}", residual=residual)
    logger.debug(f"Linear solve residual {residual:.3e}")

    theta, Theta = system.unpack(state)
    psi = Field2D(theta, system.x1)
    Psi_hat = Field2D(Theta, system.x1)
    return LinearSolution(psi=psi, Psi_hat=Psi_hat, Psi=Psi_hat + system.psi_bd, system=system, residual=residual)


def solve_linear(problem: LinearProblem, residual_tol: Optional[float] = None) -> LinearSolution:
    return solve_bvp(assemble(problem), residual_tol)


def condition_estimate(system: ModeSystem) -> float:
    """1-norm condition number estimate ||A||_1 * est(||A^-1||_1)."""
    lu = _factorize(system)
    inverse = LinearOperator(
        system.matrix.shape,
        matvec=lu.solve,
        rmatvec=lambda v: lu.solve(v, trans="T"),
        dtype=float,
    )
    estimate = float(sparse_norm(system.matrix, 1) * onenormest(inverse))
    logger.debug(f"Condition estimate {estimate:.3e} for n1={system.n1}, m={system.m}")
    return estimate


def mode_profiles_frame(solution: LinearSolution) -> pd.DataFrame:
    """One row per x1 node with theta_k and Theta_k columns."""
    columns = {"x1": solution.psi.x1}
    for k, profile in enumerate(solution.psi.modes):
        columns[f"theta_{k}"] = profile
    for k, profile in enumerate(solution.Psi_hat.modes):
        columns[f"Theta_{k}"] = profile
    return pd.DataFrame(columns)


def solution_grid_frame(solution: LinearSolution, x2: np.ndarray) -> pd.DataFrame:
    """Long-format (x1, x2, psi, Psi) table on the rectangular grid."""
    X1, X2 = np.meshgrid(solution.psi.x1, x2, indexing="ij")
    return pd.DataFrame(
        {
            "x1": X1.ravel(),
            "x2": X2.ravel(),
            "psi": solution.psi.values(x2).ravel(),
            "Psi": solution.Psi.values(x2).ravel(),
        }
    )
