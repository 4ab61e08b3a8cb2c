from .models import (
    AcceleratingReport,
    ConditionReport,
    CriticalLengthResult,
    RiccatiCase,
    RiccatiConstants,
    WeightFunction,
)
from .weight import (
    accelerating_report,
    build_weight,
    coefficient_window,
    constants_for,
    critical_length,
    riccati_constants,
    verify_pointwise_conditions,
    weight_at,
    weight_frame,
)

__all__ = [
    "AcceleratingReport",
    "ConditionReport",
    "CriticalLengthResult",
    "RiccatiCase",
    "RiccatiConstants",
    "WeightFunction",
    "accelerating_report",
    "build_weight",
    "coefficient_window",
    "constants_for",
    "critical_length",
    "riccati_constants",
    "verify_pointwise_conditions",
    "weight_at",
    "weight_frame",
]
