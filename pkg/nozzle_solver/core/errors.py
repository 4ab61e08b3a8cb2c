"""Error hierarchy shared by every solver module.

The three families map onto the command-line exit codes: configuration
problems exit with 2, solver failures with 3 and failed verification with 4.
"""
from typing import Any, Optional


class NozzleSolverError(Exception):
    exit_code: int = 1

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{key}={value}" for key, value in self.context.items())
        return f"{self.message} ({details})"


class ConfigError(NozzleSolverError):
    exit_code = 2


class ParseError(ConfigError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}", line=line)
        self.line = line
        self.reason = reason


class ValidationError(ConfigError):
    pass


class SolverError(NozzleSolverError):
    exit_code = 3


class NonPositiveArgument(SolverError):
    pass


class SonicEncounter(SolverError):
    def __init__(self, message: str, x1: Optional[float] = None):
        super().__init__(message, x1=x1)
        self.x1 = x1


class StepFailure(SolverError):
    pass


class NotApplicable(SolverError):
    pass


class SonicDenominator(SolverError):
    pass


class StagnationDenominator(SolverError):
    pass


class InadmissibleRadius(SolverError):
    def __init__(self, message: str, delta: float, feasible: float):
        super().__init__(message, delta=delta, feasible=feasible)
        self.delta = delta
        self.feasible = feasible


class LengthExceedsCritical(SolverError):
    pass


class TruncationTooHigh(SolverError):
    pass


class GridMismatch(SolverError):
    pass


class SingularSystem(SolverError):
    pass


class ResidualTooLarge(SolverError):
    pass


class MaxIterExceeded(SolverError):
    pass


class IterateEscapedSet(SolverError):
    pass


class NonMonotoneStream(SolverError):
    pass


class DivergenceTooLarge(SolverError):
    pass


class VerificationFailure(NozzleSolverError):
    exit_code = 4


__all__ = [
    "NozzleSolverError",
    "ConfigError",
    "ParseError",
    "ValidationError",
    "SolverError",
    "NonPositiveArgument",
    "SonicEncounter",
    "StepFailure",
    "NotApplicable",
    "SonicDenominator",
    "StagnationDenominator",
    "InadmissibleRadius",
    "LengthExceedsCritical",
    "TruncationTooHigh",
    "GridMismatch",
    "SingularSystem",
    "ResidualTooLarge",
    "MaxIterExceeded",
    "IterateEscapedSet",
    "NonMonotoneStream",
    "DivergenceTooLarge",
    "VerificationFailure",
]
