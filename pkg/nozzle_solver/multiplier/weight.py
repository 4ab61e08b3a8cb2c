"""Weight functions for the hyperbolic-elliptic energy estimate and the critical nozzle length.

The weight solves the Riccati equation -W' - a2 W^2 + 2 a1 W - a0 = lambda0,
whose solutions are W = root * cot(phase + a2 * root * x1) + a1 / a2:

  a0 a2 - a1^2 > 0:  root = nu(lambda0) = sqrt(disc / a2^2 + lambda0 / a2), phase = lambda0
  otherwise:         root = sqrt(beta),  beta = (lambda0 - a_star) / a2,      phase = beta
"""
import math
from typing import Optional, Tuple

import numpy as np
import pandas as pd
from scipy.optimize import brentq, minimize_scalar

from nozzle_solver.background import critical_abscissas, integrate_background
from nozzle_solver.background.integrator import linear_period
from nozzle_solver.background.models import Background1D
from nozzle_solver.core.config import get_settings
from nozzle_solver.core.errors import GridMismatch, LengthExceedsCritical, NotApplicable
from nozzle_solver.core.logger import setup_logger
from nozzle_solver.linearize import BarCoeffs, admissibility_constants
from nozzle_solver.model.models import GasParams
from nozzle_solver.multiplier.models import (
    AcceleratingReport,
    ConditionReport,
    CriticalLengthResult,
    RiccatiCase,
    RiccatiConstants,
    WeightFunction,
)

settings = get_settings()
logger = setup_logger(__name__)

# relative back-off from the positivity boundary when choosing lambda0
WEIGHT_BACKOFF = 1e-6


def coefficient_window(gp: GasParams, eps0: float, accelerating: bool = False) -> Tuple[float, float]:
    """
    Interval on which the Riccati constants are sampled, and its length clamp

    Returns:
        (window_end, t_bound): t_bound = T_max - eps0 (T_* - eps0 when accelerating), possibly
        infinite; window_end equals t_bound when finite, else one linearised period

    Raises:
        NotApplicable: If eps0 leaves no interval, or T_* is requested for E0 <= 0
    """
    ab = critical_abscissas(gp)
    edge = ab.t_max
    if accelerating:
        if ab.t_star is None:
            raise NotApplicable("the accelerating bound needs E0 > 0")
        edge = ab.t_star
    t_bound = edge - eps0
    if t_bound <= 0.0:
        raise NotApplicable(f"eps0={eps0:g} leaves no interval before {edge:.6g}")
    window = t_bound if math.isfinite(t_bound) else linear_period(gp)
    return window, t_bound


def riccati_constants(
    bg: Background1D,
    delta1: float,
    t_bound: Optional[float] = None,
    c_star: Optional[float] = None,
    c_flat: Optional[float] = None,
    lambda1_star: Optional[float] = None,
) -> RiccatiConstants:
    """
    Sample the constants a0, a1, a2 of the weight equation over the background grid

    Args:
        bg (Background1D): Background covering the coefficient window
        delta1 (float): Perturbation radius entering a0, a2 and the Morrey shift of a1
        t_bound (float): Length clamp recorded with the constants (defaults to bg.t_max)
        c_star, c_flat (float): Cauchy-Schwarz and Morrey constants (settings by default)
        lambda1_star (float): Upper end of the Case-1 lambda range

    Returns:
        RiccatiConstants

    Raises:
        InadmissibleRadius: If delta1 pushes the sampled states off the supersonic branch
    """
    c_star = settings.C_STAR if c_star is None else c_star
    c_flat = settings.C_FLAT if c_flat is None else c_flat
    bar = BarCoeffs.from_background(bg)
    mu1 = bar.mu1L
    kappa1 = admissibility_constants(bar, delta1).kappa1 if delta1 > 0.0 else float(np.min(bar.a22))

    a0 = 2.0 * c_star * delta1 / kappa1 + float(np.max(2.0 * bar.h2 ** 2 / mu1))
    a2 = float(np.max(2.0 * (bar.b1 ** 2 + bar.b2 ** 2 / mu1 + delta1)))
    a11 = float(np.min(bar.a1))
    a12 = float(np.min(-bar.d_a22 / (2.0 * bar.a22)))
    a1 = min(a11, a12) - c_flat * delta1

    rc = RiccatiConstants(
        a0=a0,
        a1=a1,
        a2=a2,
        delta_used=delta1,
        mu1=mu1,
        kappa1=kappa1,
        c_star=c_star,
        c_flat=c_flat,
        lambda1_star=settings.LAMBDA1_STAR if lambda1_star is None else lambda1_star,
        t_bound=bg.t_max if t_bound is None else t_bound,
    )
    logger.debug(f"Riccati constants a0={a0:.6g} a1={a1:.6g} a2={a2:.6g} ({rc.case.value}, C*={c_star:g}, Cb={c_flat:g})")
    return rc


def constants_for(gp: GasParams, delta1: float, eps0: float, n1: Optional[int] = None, accelerating: bool = False) -> RiccatiConstants:
    """Integrate the background over the coefficient window and sample the constants there."""
    window, t_bound = coefficient_window(gp, eps0, accelerating)
    bg = integrate_background(gp, window, n1)
    return riccati_constants(bg, delta1, t_bound=t_bound)


def _nu(rc: RiccatiConstants, lam):
    return np.sqrt(rc.discriminant / rc.a2 ** 2 + lam / rc.a2)


def _case1_length(rc: RiccatiConstants, lam: float, accelerating: bool = False) -> float:
    k = rc.a2 * _nu(rc, lam)
    tilt = math.atan(rc.a1 / k) if accelerating else -math.atan(abs(rc.a1) / k)
    return float((0.5 * math.pi - lam + tilt) / k)


def _sup_case1(rc: RiccatiConstants, accelerating: bool = False) -> Tuple[float, float]:
    hi = rc.lambda1_star
    lo = hi * 1e-12

    def objective(lam):
        return -_case1_length(rc, lam, accelerating)

    res = minimize_scalar(objective, bounds=(lo, hi), method="bounded", options={"xatol": settings.SEARCH_RTOL * hi})
    candidates = [(-objective(lo), lo), (-objective(hi), hi), (-float(res.fun), float(res.x))]
    best = max(candidates)
    logger.debug(f"sup over lambda in ({lo:.3g}, {hi:.6g}]: {best[0]:.10g} at lambda={best[1]:.6g}")
    return best


def critical_length(rc: RiccatiConstants, t_bound: Optional[float] = None) -> CriticalLengthResult:
    """
    Critical length below which a positive weight exists

    Args:
        rc (RiccatiConstants): Constants of the weight equation
        t_bound (float): Clamp, rc.t_bound by default

    Returns:
        CriticalLengthResult with the length, the case taken and, for Case 1, the maximising lambda
    """
    t_bound = rc.t_bound if t_bound is None else t_bound
    if rc.case is RiccatiCase.POSITIVE_DISCRIMINANT:
        value, lam = _sup_case1(rc)
        result = CriticalLengthResult(min(t_bound, value), rc.case, lam)
    elif rc.a1 < 0.0:
        result = CriticalLengthResult(min(t_bound, -1.0 / rc.a1), rc.case)
    else:
        result = CriticalLengthResult(t_bound, rc.case)
    logger.info(f"Critical length {result.length:.10g} ({result.case.value})")
    return result


def _parameters(rc: RiccatiConstants, lam: float) -> Tuple[float, float]:
    if rc.case is RiccatiCase.POSITIVE_DISCRIMINANT:
        return float(_nu(rc, lam)), lam
    beta = (lam - rc.a_star) / rc.a2
    if beta <= 0.0:
        raise ValueError(f"lambda0 must exceed a_star={rc.a_star:.6g}")
    return math.sqrt(beta), beta


def _profile(rc: RiccatiConstants, root: float, phase: float, x1) -> Tuple[np.ndarray, np.ndarray]:
    theta = phase + rc.a2 * root * np.asarray(x1, dtype=float)
    s = np.sin(theta)
    return root * np.cos(theta) / s + rc.a1 / rc.a2, -rc.a2 * root ** 2 / s ** 2


def weight_at(rc: RiccatiConstants, lambda0: float, x1) -> np.ndarray:
    """Closed-form W(x1; lambda0) for an explicit lambda0 (no admissibility check)."""
    root, phase = _parameters(rc, lambda0)
    return _profile(rc, root, phase, x1)[0]


def _case2_margin(rc: RiccatiConstants, lam: float, L: float) -> float:
    """Positive while W(L; lam) > 0 along the principal branch of the cotangent."""
    root, phase = _parameters(rc, lam)
    return 0.5 * math.pi + math.atan(rc.a1 / (rc.a2 * root)) - phase - rc.a2 * root * L


def _select_lambda(rc: RiccatiConstants, L: float) -> float:
    if rc.case is RiccatiCase.POSITIVE_DISCRIMINANT:
        sup, lam_peak = _sup_case1(rc)
        if L >= sup:
            raise LengthExceedsCritical("L exceeds the critical length", L=L, critical=sup)
        target = min(L * (1.0 + WEIGHT_BACKOFF), 0.5 * (L + sup))
        hi = rc.lambda1_star
        if _case1_length(rc, hi) >= target:
            return hi
        return brentq(lambda lam: _case1_length(rc, lam) - target, lam_peak, hi, rtol=settings.SEARCH_RTOL)

    if rc.a1 < 0.0 and L * (-rc.a1) >= 1.0:
        raise LengthExceedsCritical("L exceeds the critical length", L=L, critical=-1.0 / rc.a1)
    scale = max(rc.a2, abs(rc.a_star), 1.0)
    lo = rc.a_star + 1e-12 * scale
    hi = rc.a_star + scale
    while _case2_margin(rc, hi, L) > 0.0:
        hi = rc.a_star + 2.0 * (hi - rc.a_star)
    root = brentq(lambda lam: _case2_margin(rc, lam, L), lo, hi, rtol=settings.SEARCH_RTOL)
    logger.debug(f"Case-2 lambda bracket ({lo:.6g}, {hi:.6g}) -> {root:.10g}")
    return rc.a_star + (root - rc.a_star) * (1.0 - WEIGHT_BACKOFF)


def build_weight(rc: RiccatiConstants, L: float, grid: Optional[np.ndarray] = None) -> WeightFunction:
    """
    Construct the positive weight with the largest admissible lambda0

    Args:
        rc (RiccatiConstants): Constants of the weight equation
        L (float): Nozzle length
        grid (np.ndarray): x1 samples, a uniform grid on [0, L] by default

    Returns:
        WeightFunction sampled on the grid with its analytic derivative

    Raises:
        LengthExceedsCritical: If no admissible lambda0 exists for this L
    """
    if L > rc.t_bound:
        raise LengthExceedsCritical("L exceeds T_max - eps0", L=L, critical=rc.t_bound)
    grid = np.linspace(0.0, L, settings.DEFAULT_N1) if grid is None else np.asarray(grid, dtype=float)
    lambda0 = _select_lambda(rc, L)
    root, phase = _parameters(rc, lambda0)
    W, dW = _profile(rc, root, phase, grid)
    logger.info(f"Weight built for L={L:.6g}: lambda0={lambda0:.6g}, min W={float(W.min()):.4g}")
    return WeightFunction(lambda0=lambda0, constants=rc, root=root, phase=phase, x1=grid, W=W, dW=dW)


def _condition_terms(w: WeightFunction, bar: BarCoeffs, delta: float, d2_a12=None, a22=None, d1_a22=None):
    if bar.x1.shape != w.x1.shape or not np.allclose(bar.x1, w.x1, rtol=0.0, atol=1e-12 * max(1.0, w.L)):
        raise GridMismatch("weight and coefficients are sampled on different grids")
    rc = w.constants
    W, dW = w.W, w.dW
    if any(np.ndim(v) == 2 for v in (d2_a12, a22, d1_a22)):
        bar = bar.column()
        W, dW = W[:, None], dW[:, None]
    d2_a12 = 0.0 if d2_a12 is None else d2_a12
    a22 = bar.a22 if a22 is None else a22
    d1_a22 = bar.d_a22 if d1_a22 is None else d1_a22
    q1 = -dW + 2.0 * (bar.a1 - d2_a12) * W
    q2 = -a22 * dW - d1_a22 * W
    q3 = 2.0 * ((bar.b1 ** 2 + bar.b2 ** 2 / rc.mu1 + delta) * W ** 2 + bar.h2 ** 2 / rc.mu1)
    return q1 - q3, (q2 - 2.0 * rc.c_star * delta) / a22


def verify_pointwise_conditions(
    w: WeightFunction,
    bar: BarCoeffs,
    delta: float,
    d2_a12=None,
    a22=None,
    d1_a22=None,
) -> ConditionReport:
    """
    Evaluate the weight conditions on the grid

    Perturbation coefficients default to their background values; pass arrays
    broadcasting against (n1,) or (n1, n2) to check a perturbed state.
    """
    first, second = _condition_terms(w, bar, delta, d2_a12, a22, d1_a22)
    report = ConditionReport(
        lambda0=w.lambda0,
        delta=delta,
        c_star=w.constants.c_star,
        min_q1_minus_q3=float(np.min(first)),
        min_q2_over_a22=float(np.min(second)),
        min_W=float(np.min(w.W)),
    )
    logger.debug(f"weight conditions: {report}")
    return report


def weight_frame(w: WeightFunction, bar: BarCoeffs, delta: float = 0.0) -> pd.DataFrame:
    first, second = _condition_terms(w, bar, delta)
    return pd.DataFrame({"x1": w.x1, "W": w.W, "q1_minus_q3": first, "q2_over_a22": second})


def accelerating_report(gp: GasParams, delta1: float, eps0: float, n1: Optional[int] = None) -> AcceleratingReport:
    """
    Compare the generic length bound with the accelerating-flow bounds

    All three lengths use the constants sampled on [0, T_* - eps0]; the
    accelerating bound is clamped once by T_* - eps0 and once by T_max - eps0.

    Raises:
        NotApplicable: If E0 <= 0
    """
    _, t_max_bound = coefficient_window(gp, eps0)
    rc = constants_for(gp, delta1, eps0, n1, accelerating=True)
    t_star_bound = rc.t_bound
    generic = critical_length(rc).length

    if rc.case is RiccatiCase.POSITIVE_DISCRIMINANT:
        unclamped, _ = _sup_case1(rc, accelerating=True)
    elif rc.a1 < 0.0:
        unclamped = -1.0 / rc.a1
    else:
        unclamped = math.inf
    report = AcceleratingReport(
        constants=rc,
        t_star_bound=t_star_bound,
        t_max_bound=t_max_bound,
        generic_length=generic,
        accelerating_length_t_star=min(t_star_bound, unclamped),
        accelerating_length_t_max=min(t_max_bound, unclamped),
    )
    logger.info(
        f"Accelerating bounds: generic={generic:.6g}, T*-clamped={report.accelerating_length_t_star:.6g}, "
        f"Tmax-clamped={report.accelerating_length_t_max:.6g}"
    )
    return report
