from .iteration import FixedPointSolver, solve_irrotational, solve_rotational
from .models import (
    BoundaryData,
    Diagnostics,
    IterationConfig,
    LagrangianMap,
    SolutionBundle,
    StabilityBoundary,
)
from .reconstruct import perturbation_point, reconstruct, residuals
from .report import diagnostics_json, fields_frame
from .stability import configure_radii, empirical_stability_boundary, measure_stability_constant
from .transport import streamfunction, transport_solve

__all__ = [
    "BoundaryData",
    "Diagnostics",
    "FixedPointSolver",
    "IterationConfig",
    "LagrangianMap",
    "SolutionBundle",
    "StabilityBoundary",
    "configure_radii",
    "diagnostics_json",
    "empirical_stability_boundary",
    "fields_frame",
    "measure_stability_constant",
    "perturbation_point",
    "reconstruct",
    "residuals",
    "solve_irrotational",
    "solve_rotational",
    "streamfunction",
    "transport_solve",
]
