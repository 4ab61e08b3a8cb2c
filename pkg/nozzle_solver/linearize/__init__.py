from .coefficients import (
    guard_sonic,
    irrotational_coeffs,
    local_sound_speed_sq,
    rhs_f1,
    rhs_f1_literal,
    rhs_f2,
    second_order_coeffs,
    shifted_density,
    velocity,
)
from .models import AdmissibilityReport, BarCoeffs, PerturbationPoint
from .rotational import admissibility_constants, rotational_coeffs, rotational_rhs


def bar_coefficients(bg) -> BarCoeffs:
    return BarCoeffs.from_background(bg)


__all__ = [
    "AdmissibilityReport",
    "BarCoeffs",
    "PerturbationPoint",
    "admissibility_constants",
    "bar_coefficients",
    "guard_sonic",
    "irrotational_coeffs",
    "local_sound_speed_sq",
    "rhs_f1",
    "rhs_f1_literal",
    "rhs_f2",
    "rotational_coeffs",
    "rotational_rhs",
    "second_order_coeffs",
    "shifted_density",
    "velocity",
]
