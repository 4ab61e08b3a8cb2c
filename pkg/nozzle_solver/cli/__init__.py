from .commands import app
from .config import DEFAULT_CONFIG_PATH, load_config, parse_config, serialize_config
from .models import DataConfig, DomainConfig, RunConfig
from .workflows import (
    TOLERANCES,
    VerificationReport,
    raise_on_failure,
    run_critical_length,
    run_linear,
    run_nonlinear,
    run_verify,
)

__all__ = [
    "DEFAULT_CONFIG_PATH",
    "DataConfig",
    "DomainConfig",
    "RunConfig",
    "TOLERANCES",
    "VerificationReport",
    "app",
    "load_config",
    "parse_config",
    "raise_on_failure",
    "run_critical_length",
    "run_linear",
    "run_nonlinear",
    "run_verify",
    "serialize_config",
]
