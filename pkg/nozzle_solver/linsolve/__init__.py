from .energy import energy_report
from .galerkin import (
    assemble,
    condition_estimate,
    mode_couplings,
    mode_profiles_frame,
    relative_residual,
    solution_grid_frame,
    solve_bvp,
    solve_linear,
)
from .models import EnergyReport, LinearProblem, LinearSolution, ModeSystem
from .poisson import modal_tridiagonal, solve_poisson_phi

__all__ = [
    "EnergyReport",
    "LinearProblem",
    "LinearSolution",
    "ModeSystem",
    "assemble",
    "condition_estimate",
    "energy_report",
    "modal_tridiagonal",
    "mode_couplings",
    "mode_profiles_frame",
    "relative_residual",
    "solution_grid_frame",
    "solve_bvp",
    "solve_linear",
    "solve_poisson_phi",
]
