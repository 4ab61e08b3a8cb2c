from .compatibility import CompatibilityReport, DatumCheck, check_compatibility, wall_derivative
from .field import Field2D
from .series import (
    BasisKind,
    CosineSeries,
    SineSeries,
    basis_matrix,
    max_modes,
    phi_en,
    project,
    project_coefficients,
    quadrature_weights,
    reconstruct,
    wavenumbers,
    x2_grid,
)

__all__ = [
    "BasisKind",
    "CompatibilityReport",
    "CosineSeries",
    "DatumCheck",
    "Field2D",
    "SineSeries",
    "basis_matrix",
    "check_compatibility",
    "max_modes",
    "phi_en",
    "project",
    "project_coefficients",
    "quadrature_weights",
    "reconstruct",
    "wall_derivative",
    "wavenumbers",
    "x2_grid",
]
