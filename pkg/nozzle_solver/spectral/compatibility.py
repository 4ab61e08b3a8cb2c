"""Wall compatibility checks for inlet and exit boundary data."""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Tuple, Union

import numpy as np

from nozzle_solver.core.logger import setup_logger
from nozzle_solver.spectral.series import CosineSeries, SineSeries

logger = setup_logger(__name__)

Datum = Union[CosineSeries, SineSeries, Callable[[np.ndarray], np.ndarray]]

# Slip data needs vanishing odd derivatives at the walls; the tangential inlet velocity needs even ones.
WALL_ORDERS: Dict[str, Tuple[int, ...]] = {
    "u_en": (1, 3),
    "E_en": (1, 3),
    "Phi_ex": (1, 3),
    "S_en": (1, 3),
    "v_en": (0, 2),
    "b": (1,),
}

WALLS = np.array([-1.0, 1.0])
FD_STEP = 1e-2
COMPAT_TOL = 1e-8


@dataclass
class DatumCheck:
    name: str
    order: int
    measured: Tuple[float, float]
    passed: bool


@dataclass
class CompatibilityReport:
    checks: List[DatumCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> List[DatumCheck]:
        return [c for c in self.checks if not c.passed]

    def for_datum(self, name: str) -> List[DatumCheck]:
        return [c for c in self.checks if c.name == name]


def _central_difference(f: Callable, x: float, order: int, h: float = FD_STEP) -> float:
    if order == 0:
        return float(f(np.array([x]))[0])
    stencil = x + h * np.arange(-2, 3)
    v = np.asarray(f(stencil), dtype=float)
    if order == 1:
        return float((v[3] - v[1]) / (2 * h))
    if order == 2:
        return float((v[3] - 2 * v[2] + v[1]) / h ** 2)
    if order == 3:
        return float((v[4] - 2 * v[3] + 2 * v[1] - v[0]) / (2 * h ** 3))
    raise ValueError(f"unsupported derivative order {order}")


def wall_derivative(datum: Datum, order: int) -> Tuple[float, float]:
    """Derivative of the given order at x2 = -1 and x2 = +1."""
    if isinstance(datum, (CosineSeries, SineSeries)):
        vals = datum.evaluate(WALLS, order)
        return float(vals[0]), float(vals[1])
    return _central_difference(datum, -1.0, order), _central_difference(datum, 1.0, order)


def check_compatibility(data: Mapping[str, Datum], tol: float = COMPAT_TOL) -> CompatibilityReport:
    """
    Check the wall derivative conditions of every supplied datum

    Args:
        data: Map from datum name (u_en, E_en, Phi_ex, S_en, v_en, b) to a series or
            a vectorized callable defined slightly beyond [-1, 1]
        tol: Absolute tolerance on the measured wall derivatives

    Returns:
        CompatibilityReport: per datum and order, the measured derivatives and a pass flag
    """
    report = CompatibilityReport()
    for name, datum in data.items():
        if name not in WALL_ORDERS:
            raise KeyError(f"unknown boundary datum '{name}'")
        for order in WALL_ORDERS[name]:
            measured = wall_derivative(datum, order)
            passed = max(abs(measured[0]), abs(measured[1])) <= tol
            report.checks.append(DatumCheck(name, order, measured, passed))
            if not passed:
                logger.warning(f"{name}: order-{order} wall derivative {measured} exceeds {tol:g}")
    logger.debug(f"compatibility: {len(report.checks)} checks, passed={report.passed}")
    return report


def log_report(report: CompatibilityReport, level: int = logging.INFO) -> None:
    for c in report.checks:
        logger.log(level, f"{c.name:>7} k={c.order} walls=({c.measured[0]:+.3e}, {c.measured[1]:+.3e}) {'ok' if c.passed else 'FAIL'}")
