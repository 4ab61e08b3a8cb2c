import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.integrate import trapezoid

from nozzle_solver.background import integrate_background
from nozzle_solver.core.errors import GridMismatch, TruncationTooHigh
from nozzle_solver.linearize import BarCoeffs
from nozzle_solver.linsolve import (
    LinearProblem,
    assemble,
    condition_estimate,
    energy_report,
    modal_tridiagonal,
    mode_profiles_frame,
    relative_residual,
    solution_grid_frame,
    solve_bvp,
    solve_linear,
    solve_poisson_phi,
)
from nozzle_solver.multiplier import build_weight, riccati_constants
from nozzle_solver.spectral import BasisKind, CosineSeries, Field2D, project, wavenumbers, x2_grid

X2 = x2_grid(129)
WALLS = np.array([-1.0, 1.0])


@pytest.fixture(scope="module")
def bars(gas_periodic):
    cache = {}

    def get(n1):
        if n1 not in cache:
            cache[n1] = BarCoeffs.from_background(integrate_background(gas_periodic, L=0.5, n1=n1))
        return cache[n1]

    return get


@pytest.fixture(scope="module")
def weight_constants(bg_equilibrium):
    return riccati_constants(bg_equilibrium, 0.0)


def _random_problem(bar, m, rng, x2=X2, amplitude=1.0, inlet=False):
    """Band-limited data on the first five modes with x2-dependent frozen coefficients."""
    x1 = bar.x1
    active = 5
    a22 = bar.a22[:, None] * (1.0 + 0.1 * np.cos(np.pi * x2)[None, :] * np.cos(x1)[:, None])
    a12 = 0.05 * np.sin(np.pi * x2)[None, :] * (1.0 + x1)[:, None]

    def profiles():
        c, w, s = rng.uniform(-1.0, 1.0, active), rng.uniform(0.5, 3.0, active), rng.uniform(0.0, np.pi, active)
        out = np.zeros((m + 1, x1.size))
        out[:active] = c[:, None] * np.cos(w[:, None] * x1[None, :] + s[:, None])
        return Field2D(amplitude * out, x1)

    def series():
        out = np.zeros(m + 1)
        out[:active] = rng.uniform(-1.0, 1.0, active)
        return CosineSeries(amplitude * out)

    extra = dict(a12=a12, a22=a22, f1=profiles(), f2=profiles(), g1=series(), g2=series(), psi_ex=series())
    if inlet:
        extra["psi0"] = series()
    return LinearProblem.at_background(bar, m, x2, **extra)


def _manufactured(bar, m):
    """psi = sin(2 x1) cos(2 pi x2), Psi_hat = cos(pi x1 / 2L) cos(pi x2) with background coefficients."""
    x = bar.x1
    w = 0.5 * math.pi / bar.L
    theta, d_theta, dd_theta = np.sin(2 * x), 2 * np.cos(2 * x), -4 * np.sin(2 * x)
    Theta, d_Theta = np.cos(w * x), -w * np.sin(w * x)
    f1 = np.zeros((m + 1, x.size))
    f2 = np.zeros((m + 1, x.size))
    f1[2] = dd_theta + bar.a1 * d_theta + (2 * math.pi) ** 2 * bar.a22 * theta
    f1[1] = bar.b1 * d_Theta + bar.b2 * Theta
    f2[1] = -(w ** 2) * Theta - math.pi ** 2 * Theta - bar.h1 * Theta
    f2[2] = -bar.h2 * d_theta
    g1 = np.zeros(m + 1)
    g1[2] = 2.0
    exact_psi = np.zeros((m + 1, x.size))
    exact_psi[2] = theta
    exact_Psi = np.zeros((m + 1, x.size))
    exact_Psi[1] = Theta
    problem = LinearProblem.at_background(bar, m, X2, f1=Field2D(f1, x), f2=Field2D(f2, x), g1=CosineSeries(g1))
    return problem, Field2D(exact_psi, x), Field2D(exact_Psi, x)


def _grid_h1(values, x1, x2):
    d1 = np.gradient(values, x1, axis=0, edge_order=2)
    d2 = np.gradient(values, x2, axis=1, edge_order=2)
    density = trapezoid(values ** 2 + d1 ** 2 + d2 ** 2, x2, axis=1)
    return float(np.sqrt(trapezoid(density, x1)))


def test_zero_data_gives_zero_solution(bars):
    system = assemble(LinearProblem.at_background(bars(129), 6, X2))
    assert np.all(system.f1 == 0.0) and np.all(system.f2 == 0.0)
    assert np.all(system.rhs == 0.0)
    solution = solve_bvp(system)
    assert np.max(np.abs(solution.psi.modes)) < 1e-12
    assert np.max(np.abs(solution.Psi.modes)) < 1e-12


def test_background_couplings_are_diagonal(bars):
    bar = bars(129)
    system = assemble(LinearProblem.at_background(bar, 8, X2))
    assert np.max(np.abs(system.c12)) < 1e-12
    k = np.arange(9)
    off = system.d22.copy()
    off[:, k, k] = 0.0
    assert np.max(np.abs(off)) < 1e-12
    kappa2 = wavenumbers(BasisKind.COSINE, 9) ** 2
    np.testing.assert_allclose(system.d22[:, k, k], bar.a22[:, None] * kappa2[None, :], rtol=1e-12, atol=1e-12)


def test_second_order_in_x1(bars):
    errors = []
    for n1 in (129, 257):
        problem, exact_psi, exact_Psi = _manufactured(bars(n1), 4)
        solution = solve_linear(problem)
        errors.append((solution.psi - exact_psi).h1_norm() + (solution.Psi - exact_Psi).h1_norm())
    assert errors[1] < 1e-3
    assert errors[0] / errors[1] >= 3.5


def test_spectral_in_x2(bars):
    bar = bars(129)
    col = bar.column()
    x1, L = bar.x1[:, None], bar.L
    D = 1.5 - np.cos(np.pi * X2)
    dD, ddD = np.pi * np.sin(np.pi * X2), np.pi ** 2 * np.cos(np.pi * X2)
    q, dq, ddq = 1.0 / D, -dD / D ** 2, -ddD / D ** 2 + 2.0 * dD ** 2 / D ** 3
    a22 = col.a22 * (1.0 + 0.2 * np.cos(np.pi * X2))
    a12 = 0.05 * np.sin(np.pi * X2) * (1.0 + x1)
    lift = x1 ** 2 - L ** 2
    f1 = 2.0 * a12 * dq - a22 * x1 * ddq + col.a1 * q + 2.0 * col.b1 * x1 * q + col.b2 * lift * q
    f2 = 2.0 * q + lift * ddq - col.h1 * lift * q - col.h2 * q

    fine = x2_grid(513)
    q_fine = 1.0 / (1.5 - np.cos(np.pi * fine))
    errors = []
    for m in (8, 16):
        problem = LinearProblem.at_background(
            bar,
            m,
            X2,
            a12=a12,
            a22=a22,
            f1=Field2D.from_grid(f1, bar.x1, X2, BasisKind.COSINE, m),
            f2=Field2D.from_grid(f2, bar.x1, X2, BasisKind.COSINE, m),
            g1=project(q, X2, BasisKind.COSINE, m),
        )
        solution = solve_linear(problem)
        psi_err = solution.psi.values(fine) - x1 * q_fine
        Psi_err = solution.Psi.values(fine) - lift * q_fine
        errors.append(_grid_h1(psi_err, bar.x1, fine) + _grid_h1(Psi_err, bar.x1, fine))
    assert errors[0] / errors[1] >= 10.0


def test_single_mode_matches_tridiagonal_solve(bars):
    bar = bars(257)
    zero = np.zeros_like(bar.b1)
    quiet = replace(bar, b1=zero, b2=zero, h2=zero)
    k, m = 3, 5
    forcing = np.zeros((m + 1, bar.x1.size))
    forcing[k] = 1.0 + np.cos(3.0 * bar.x1)
    solution = solve_linear(LinearProblem.at_background(quiet, m, X2, f2=Field2D(forcing, bar.x1)))
    h = float(bar.x1[1] - bar.x1[0])
    reference = modal_tridiagonal((k * math.pi) ** 2 + bar.h1[:-1], h, forcing[k, :-1])
    scale = np.max(np.abs(reference))
    np.testing.assert_allclose(solution.Psi_hat.modes[k], reference, atol=1e-3 * scale)
    assert np.max(np.abs(np.delete(solution.Psi_hat.modes, k, axis=0))) < 1e-14
    assert np.max(np.abs(solution.psi.modes)) < 1e-14


def test_boundary_lift_carries_psi_data(bars):
    m = 4
    g2 = CosineSeries(np.array([0.01, 0.0, 0.02, 0.0, 0.0]))
    psi_ex = CosineSeries(np.array([0.0, 0.03, 0.0, 0.0, 0.01]))
    solution = solve_linear(LinearProblem.at_background(bars(129), m, X2, g2=g2, psi_ex=psi_ex))
    np.testing.assert_allclose(solution.Psi_hat.modes[:, -1], 0.0, atol=1e-12)
    np.testing.assert_allclose(solution.Psi_hat.dx1().modes[:, 0], 0.0, atol=1e-10)
    np.testing.assert_allclose(solution.Psi.modes[:, -1], psi_ex.coeffs, atol=1e-12)
    np.testing.assert_allclose(solution.Psi.dx1().modes[:, 0], g2.coeffs, atol=1e-10)
    assert np.max(np.abs(solution.psi.modes)) > 0.0


def test_residual_closure_and_traces(bars, rng):
    problem = _random_problem(bars(129), 8, rng, inlet=True)
    system = assemble(problem)
    solution = solve_bvp(system)
    assert solution.residual < 1e-8
    state = system.pack(solution.psi.modes, solution.Psi_hat.modes)
    assert relative_residual(system, state) == pytest.approx(solution.residual, abs=1e-15)

    inlet_slope = solution.psi.dx1().values(X2)[0]
    np.testing.assert_allclose(inlet_slope, problem.g1.evaluate(X2), atol=1e-9)
    np.testing.assert_allclose(solution.psi.values(X2)[0], problem.psi0.evaluate(X2), atol=1e-12)


def test_wall_slip_is_built_in(bars, rng):
    solution = solve_linear(_random_problem(bars(129), 8, rng))
    for order in (1, 3):
        assert np.max(np.abs(solution.psi.values(WALLS, order))) < 1e-9
        assert np.max(np.abs(solution.Psi.values(WALLS, order))) < 1e-9


@pytest.mark.parametrize("inlet", [False, True])
def test_energy_identity(bars, weight_constants, inlet):
    x2 = x2_grid(513)
    for n1, m in ((129, 8), (513, 16)):
        bar = bars(n1)
        problem = _random_problem(bar, m, np.random.default_rng(7), x2=x2, inlet=inlet)
        weight = build_weight(weight_constants, bar.L, bar.x1)
        report = energy_report(problem, solve_linear(problem), weight)
        scale = abs(report.j1) + abs(report.j2) + abs(report.j3)
        assert scale > 0.0
        assert abs(report.direct - report.decomposed) < 1e-6 * scale
        assert report.discrepancy < 1e-6


def test_energy_report_for_zero_data(bars, weight_constants):
    bar = bars(129)
    problem = LinearProblem.at_background(bar, 4, X2)
    report = energy_report(problem, solve_linear(problem), build_weight(weight_constants, bar.L, bar.x1))
    assert report.trivial
    assert report.estimate_ratio is None
    assert report.direct == 0.0 and report.decomposed == 0.0


def test_estimate_ratio_is_amplitude_independent(bars, weight_constants):
    bar = bars(129)
    weight = build_weight(weight_constants, bar.L, bar.x1)
    ratios = []
    for amplitude in (1e-3, 1e-2, 1e-1):
        problem = _random_problem(bar, 8, np.random.default_rng(11), amplitude=amplitude)
        ratios.append(energy_report(problem, solve_linear(problem), weight).estimate_ratio)
    assert ratios[0] > 0.0
    np.testing.assert_allclose(ratios, ratios[0], rtol=0.05)


@pytest.mark.slow
def test_condition_growth_is_at_most_quadratic(gas_periodic):
    sizes = [(129, 8), (257, 16), (513, 32)]
    estimates = []
    for n1, m in sizes:
        bar = BarCoeffs.from_background(integrate_background(gas_periodic, L=0.5, n1=n1))
        estimates.append(condition_estimate(assemble(LinearProblem.at_background(bar, m, x2_grid(257)))))
    for (n_prev, _), (n_next, _), c_prev, c_next in zip(sizes, sizes[1:], estimates, estimates[1:]):
        assert c_next / c_prev <= 2.0 * (n_next / n_prev) ** 2


def test_grid_mismatch_and_truncation(bars):
    bar = bars(129)
    other = Field2D.zeros(BasisKind.COSINE, 5, np.linspace(0.0, 0.4, 129))
    with pytest.raises(GridMismatch):
        assemble(LinearProblem.at_background(bar, 4, X2, f1=other))
    with pytest.raises(GridMismatch):
        assemble(LinearProblem.at_background(bar, 4, X2, a22=np.ones((129, 65))))
    with pytest.raises(TruncationTooHigh):
        assemble(LinearProblem.at_background(bar, 40, X2))


def test_frames(bars, rng):
    m = 4
    solution = solve_linear(_random_problem(bars(129), m, rng))
    frame = mode_profiles_frame(solution)
    assert frame.shape == (129, 1 + 2 * (m + 1))
    assert list(frame.columns[:2]) == ["x1", "theta_0"]
    grid = solution_grid_frame(solution, x2_grid(9))
    assert grid.shape == (129 * 9, 4)


def test_poisson_zero_source():
    x1 = np.linspace(0.0, 0.5, 65)
    phi = solve_poisson_phi(Field2D.zeros(BasisKind.SINE, 6, x1))
    assert np.all(phi.modes == 0.0)


def test_poisson_manufactured_second_order():
    L = 0.5
    errors = []
    for n1 in (65, 129):
        x1 = np.linspace(0.0, L, n1)
        exact = np.cos(0.5 * math.pi * x1 / L)
        source = np.zeros((3, n1))
        source[0] = -((0.5 * math.pi / L) ** 2 + (0.5 * math.pi) ** 2) * exact
        phi = solve_poisson_phi(Field2D(source, x1, BasisKind.SINE))
        errors.append(np.max(np.abs(phi.modes[0] - exact)))
        assert np.max(np.abs(phi.modes[1:])) == 0.0
    assert errors[0] / errors[1] >= 3.5


def test_poisson_mode_decay():
    x1 = np.linspace(0.0, 1.0, 257)
    n_modes = 8
    phi = solve_poisson_phi(Field2D(np.ones((n_modes, x1.size)), x1, BasisKind.SINE))
    kappa = wavenumbers(BasisKind.SINE, n_modes)
    scaled = np.max(np.abs(phi.modes), axis=1) * kappa ** 2
    assert np.all(scaled >= 0.5) and np.all(scaled <= 1.0)
    assert np.all(phi.modes[:, -1] == 0.0)


def test_poisson_rejects_cosine_fields():
    with pytest.raises(GridMismatch):
        solve_poisson_phi(Field2D.zeros(BasisKind.COSINE, 3, np.linspace(0.0, 1.0, 9)))
