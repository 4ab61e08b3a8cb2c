from .hamiltonian import (
    desingularized_field,
    hamiltonian,
    hamiltonian_quad,
    hamiltonian_second_derivative,
)
from .integrator import (
    classify_orbit,
    critical_abscissas,
    integrate_background,
    is_equilibrium,
    orbit_period,
    sonic_approach,
)
from .models import Background1D, CriticalAbscissas, OrbitClass, OrbitClassification
from .plotting import phase_portrait

__all__ = [
    "Background1D",
    "CriticalAbscissas",
    "OrbitClass",
    "OrbitClassification",
    "classify_orbit",
    "critical_abscissas",
    "desingularized_field",
    "hamiltonian",
    "hamiltonian_quad",
    "hamiltonian_second_derivative",
    "integrate_background",
    "is_equilibrium",
    "orbit_period",
    "phase_portrait",
    "sonic_approach",
]
