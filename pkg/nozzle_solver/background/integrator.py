from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.integrate import quad, solve_ivp

from nozzle_solver.background.hamiltonian import desingularized_field, hamiltonian, orbit_field
from nozzle_solver.background.models import (
    Background1D,
    CriticalAbscissas,
    OrbitClass,
    OrbitClassification,
)
from nozzle_solver.core.config import get_settings
from nozzle_solver.core.errors import NotApplicable, SonicEncounter, StepFailure
from nozzle_solver.core.logger import setup_logger
from nozzle_solver.model.models import GasParams
from nozzle_solver.model.thermo import velocity_denominator

settings = get_settings()
logger = setup_logger(__name__)

# chunks of one linearised period searched before giving up on an event
MAX_EVENT_CHUNKS = 400


def classify_orbit(gp: GasParams) -> OrbitClassification:
    h0 = hamiltonian(gp, gp.rho0)
    d = 0.5 * gp.E0 ** 2 - h0
    tol = settings.CLASSIFY_TOL * max(1.0, gp.E0 ** 2, abs(h0))
    if abs(d) <= tol:
        orbit = OrbitClass.SEPARATRIX
    elif d < 0.0:
        orbit = OrbitClass.PERIODIC
    else:
        orbit = OrbitClass.SONIC_BLOWUP
    return OrbitClassification(orbit=orbit, discriminant=d, tolerance=tol)


def is_equilibrium(gp: GasParams) -> bool:
    return abs(gp.rho0 - gp.b0) <= 1e-14 * gp.b0 and abs(gp.E0) <= 1e-14


def linear_period(gp: GasParams) -> float:
    """Period of the linearised oscillation about (b0, 0)."""
    omega_sq = gp.b0 / abs(velocity_denominator(gp, gp.b0))
    return 2.0 * np.pi / np.sqrt(omega_sq)


def _smooth_rhs(gp: GasParams) -> Callable:
    def rhs(x, y):
        rho, E = y[0], y[1]
        return [
            E * rho / velocity_denominator(gp, rho),
            rho - gp.b0,
            gp.J0 / rho,
            E,
        ]

    return rhs


def _branch(E: float) -> float:
    # upper branch (E > 0) has rho' = -F, lower branch rho' = +F
    return -1.0 if E > 0.0 else 1.0


def _desingular_rhs(gp: GasParams, sign: float) -> Callable:
    """Desingularised field on a fixed branch; E passes through zero at rho_s, so the branch is set once."""

    def rhs(x, y):
        rho, E = y[0], y[1]
        return [
            sign * desingularized_field(gp, min(rho, gp.rho_s)),
            rho - gp.b0,
            gp.J0 / rho,
            E,
        ]

    return rhs


def _event(fn: Callable, terminal: bool, direction: float) -> Callable:
    fn.terminal = terminal
    fn.direction = direction
    return fn


def _solve(rhs, span, y0, events, x_eval=None):
    sol = solve_ivp(
        rhs,
        span,
        y0,
        method="DOP853",
        rtol=settings.BACKGROUND_RTOL,
        atol=settings.BACKGROUND_ATOL,
        dense_output=True,
        events=events,
    )
    if sol.status == -1:
        raise StepFailure(f"background integration failed: {sol.message}", x1=float(sol.t[-1]))
    return sol


def _initial_state(gp: GasParams) -> List[float]:
    return [gp.rho0, gp.E0, 0.0, gp.B0]


def _march(
    gp: GasParams,
    orbit: OrbitClassification,
    x_end: float,
    x_eval: np.ndarray,
) -> np.ndarray:
    """Integrate (rho, E, phi0, Phi0) from 0 to x_end and sample at x_eval.

    Separatrix orbits switch to the desingularised field near rho_s.
    """
    rs = gp.rho_s
    switch_rho = rs * (1.0 - settings.SEPARATRIX_SWITCH)
    guard_rho = rs - settings.SONIC_GUARD * rs
    direction = 1.0 if x_end >= 0.0 else -1.0
    samples = np.empty((4, x_eval.size))
    separatrix = orbit.orbit is OrbitClass.SEPARATRIX
    desingular = separatrix and gp.rho0 >= switch_rho
    x, y = 0.0, _initial_state(gp)

    while True:
        sonic = _event(lambda t, s: s[0] - guard_rho, True, 1.0)
        events = [sonic]
        if desingular:
            rhs = _desingular_rhs(gp, _branch(y[1]))
        else:
            rhs = _smooth_rhs(gp)
            if separatrix:
                events.append(_event(lambda t, s: s[0] - switch_rho, True, 1.0))
        sol = _solve(rhs, (x, x_end), y, events)
        seg_end = float(sol.t[-1])
        lo, hi = sorted((x, seg_end))
        mask = (x_eval >= lo) & (x_eval <= hi)
        if np.any(mask):
            samples[:, mask] = sol.sol(x_eval[mask])
        if sol.status != 1:
            return samples
        if sol.t_events[0].size:
            x_hit = float(sol.t_events[0][0])
            raise SonicEncounter(
                "background density reached the sonic guard inside the domain; "
                "the requested length exceeds the supersonic range",
                x1=x_hit,
            )
        logger.debug(f"Switching to the desingularised separatrix field at x1={seg_end:.6g}")
        desingular = True
        x, y = seg_end, list(sol.y_events[1][0])
        if direction * (x_end - x) <= 0.0:
            return samples


def _margins(gp: GasParams, rho: np.ndarray, u: np.ndarray) -> Tuple[float, float]:
    eps0 = float(min(rho.min(), gp.rho_s - rho.max()))
    excess = u ** 2 - gp.gamma * gp.m0 ** (gp.gamma - 1.0) / np.power(u, gp.gamma - 1.0)
    mu0 = float(min(excess.min(), 1.0 / excess.max()))
    return eps0, mu0


def integrate_background(
    gp: GasParams,
    L: float,
    n1: Optional[int] = None,
    abscissas: Optional[CriticalAbscissas] = None,
) -> Background1D:
    """
    Integrate the background system on [0, L] and sample it on a uniform grid

    Args:
        gp (GasParams): Gas constants and inlet data
        L (float): Nozzle length
        n1 (int): Number of grid nodes, defaults to settings.DEFAULT_N1
        abscissas (CriticalAbscissas): Precomputed critical abscissas, if available

    Returns:
        Background1D: Sampled profiles with margins and critical abscissas

    Raises:
        SonicEncounter: If the density reaches the sonic guard inside [0, L]
        StepFailure: If adaptive stepping fails
    """
    n1 = n1 or settings.DEFAULT_N1
    orbit = classify_orbit(gp)
    grid = np.linspace(0.0, L, n1)
    logger.info(f"Integrating {orbit.orbit.value} background on [0, {L:.6g}] with {n1} nodes")

    if is_equilibrium(gp):
        rho = np.full(n1, gp.b0)
        E = np.zeros(n1)
        phi0 = gp.J0 / gp.b0 * grid
        Phi0 = np.full(n1, gp.B0)
    else:
        rho, E, phi0, Phi0 = _march(gp, orbit, L, grid)

    if abscissas is None:
        abscissas = critical_abscissas(gp)
    u = gp.J0 / rho
    eps0, mu0 = _margins(gp, rho, u)
    return Background1D(
        gas=gp,
        grid=grid,
        rho=rho,
        u=u,
        E=E,
        phi0=phi0,
        Phi0=Phi0,
        orbit=orbit,
        t_max=abscissas.t_max,
        t_min=abscissas.t_min,
        t_star=abscissas.t_star,
        eps0=eps0,
        mu0=mu0,
    )


def _first_event(
    gp: GasParams,
    event_fn: Callable,
    direction: float,
    event_direction: float,
    skip: float,
) -> float:
    """First crossing of event_fn beyond |x| > skip along the smooth field, searched chunk by chunk."""
    chunk = linear_period(gp)
    x, y = 0.0, _initial_state(gp)
    rhs = _smooth_rhs(gp)
    for _ in range(MAX_EVENT_CHUNKS):
        x_next = x + direction * chunk
        sol = _solve(rhs, (x, x_next), y, [_event(event_fn, True, event_direction)])
        if sol.status != 1:
            x, y = x_next, list(sol.y[:, -1])
            continue
        hit = float(sol.t_events[0][0])
        if abs(hit) > skip:
            return hit
        # crossing sits on the starting point; step past it without events
        nudge = hit + direction * 1e3 * skip
        sol = _solve(rhs, (hit, nudge), list(sol.y_events[0][0]), None)
        x, y = nudge, list(sol.y[:, -1])
    raise NotApplicable("no event found within the search horizon")


def _sonic_arrival(gp: GasParams, orbit: OrbitClassification, direction: float) -> float:
    """Abscissa at which the orbit reaches rho_s, forward or backward."""
    rs = gp.rho_s
    switch_rho = rs * (1.0 - settings.SEPARATRIX_SWITCH)
    chunk = linear_period(gp)
    rhs = _smooth_rhs(gp)
    x, y = 0.0, _initial_state(gp)
    approaching = gp.E0 * direction < 0.0
    if y[0] < switch_rho or not approaching:
        for _ in range(MAX_EVENT_CHUNKS):
            x_next = x + direction * chunk
            sol = _solve(rhs, (x, x_next), y, [_event(lambda t, s: s[0] - switch_rho, True, 1.0)])
            if sol.status == 1:
                x, y = float(sol.t_events[0][0]), list(sol.y_events[0][0])
                break
            x, y = x_next, list(sol.y[:, -1])
        else:
            raise NotApplicable("orbit never approaches the sonic density")
    rho_sw, E_sw = y[0], y[1]
    if orbit.orbit is OrbitClass.SEPARATRIX:
        # rho' = sign F with F > 0 up to and including rho_s
        sign = _branch(E_sw)
        extra, _ = quad(
            lambda r: 1.0 / desingularized_field(gp, r), rho_sw, rs, epsabs=1e-14, epsrel=1e-12, limit=200
        )
        return x + sign * extra
    # dx/drho = D/(E rho) is regular at rho_s when E stays away from zero
    sign = np.sign(E_sw)
    d = orbit.discriminant

    def dx_drho(r):
        return velocity_denominator(gp, r) / (orbit_field(gp, r, d, sign) * r)

    extra, _ = quad(dx_drho, rho_sw, rs, epsabs=1e-14, epsrel=1e-12, limit=200)
    return x + extra


def critical_abscissas(gp: GasParams) -> CriticalAbscissas:
    """Locate T_min, T_max and (for E0 > 0) T_* by event detection."""
    orbit = classify_orbit(gp)
    if is_equilibrium(gp):
        return CriticalAbscissas(t_min=-np.inf, t_max=np.inf, t_star=None)

    skip = settings.EVENT_TOL * linear_period(gp)
    if orbit.orbit is OrbitClass.PERIODIC:
        # rho is maximal where E crosses zero upward
        t_max = _first_event(gp, lambda t, s: s[1], 1.0, 1.0, skip)
        t_min = _first_event(gp, lambda t, s: s[1], -1.0, -1.0, skip)
    else:
        t_max = _sonic_arrival(gp, orbit, 1.0)
        t_min = _sonic_arrival(gp, orbit, -1.0)

    t_star = None
    if gp.E0 > 0.0:
        t_star = _first_event(gp, lambda t, s: s[1], 1.0, -1.0, skip)
    logger.info(f"Critical abscissas: T_min={t_min:.10g}, T_max={t_max:.10g}, T_*={t_star}")
    return CriticalAbscissas(t_min=t_min, t_max=t_max, t_star=t_star)


def orbit_period(gp: GasParams) -> float:
    orbit = classify_orbit(gp)
    if orbit.orbit is not OrbitClass.PERIODIC:
        raise NotApplicable(f"{orbit.orbit.value} orbits are not periodic")
    ab = critical_abscissas(gp)
    return ab.t_max - ab.t_min


def sonic_approach(gp: GasParams, n: int = 40, closest: float = 1e-10) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Sample (x1, rho, |rho'|) on the final approach to rho_s in the density parameterisation

    Args:
        gp (GasParams): Gas constants of a Separatrix or SonicBlowup orbit
        n (int): Number of samples
        closest (float): Relative distance to rho_s of the last sample

    Returns:
        Tuple of arrays (x1, rho, |rho'|) ordered towards T_max
    """
    orbit = classify_orbit(gp)
    if orbit.orbit is OrbitClass.PERIODIC:
        raise NotApplicable("periodic orbits stay away from the sonic density")
    rs = gp.rho_s
    t_max = _sonic_arrival(gp, orbit, 1.0)
    gaps = rs * np.geomspace(settings.SEPARATRIX_SWITCH, closest, n)
    rho = rs - gaps
    d = orbit.discriminant
    # forward arrival happens on the lower branch (E <= 0)
    E = np.array([orbit_field(gp, r, d, -1.0) for r in rho])
    speed = np.abs(E * rho / velocity_denominator(gp, rho))

    def dx_drho(r):
        if orbit.orbit is OrbitClass.SEPARATRIX:
            return 1.0 / desingularized_field(gp, r)
        return velocity_denominator(gp, r) / (orbit_field(gp, r, d, -1.0) * r)

    x = np.array([t_max - quad(dx_drho, r, rs, epsabs=1e-15, limit=200)[0] for r in rho])
    return x, rho, speed
