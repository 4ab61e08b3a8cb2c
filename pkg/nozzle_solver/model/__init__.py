from .models import FlowState, GasParams
from .thermo import (
    bernoulli,
    density_isentropic,
    density_law,
    enthalpy,
    pressure,
    pseudo_bernoulli,
    sonic_density,
    sound_speed,
    sound_speed_sq,
    velocity_denominator,
)

__all__ = [
    "FlowState",
    "GasParams",
    "bernoulli",
    "density_isentropic",
    "density_law",
    "enthalpy",
    "pressure",
    "pseudo_bernoulli",
    "sonic_density",
    "sound_speed",
    "sound_speed_sq",
    "velocity_denominator",
]
