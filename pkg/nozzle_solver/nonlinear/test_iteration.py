import numpy as np
import orjson
import pytest

from nozzle_solver.background import integrate_background
from nozzle_solver.core.errors import (
    IterateEscapedSet,
    LengthExceedsCritical,
    MaxIterExceeded,
    ValidationError,
)
from nozzle_solver.nonlinear import (
    BoundaryData,
    IterationConfig,
    configure_radii,
    diagnostics_json,
    empirical_stability_boundary,
    fields_frame,
    measure_stability_constant,
    solve_irrotational,
    solve_rotational,
)
from nozzle_solver.spectral import BasisKind, CosineSeries, Field2D, SineSeries, x2_grid

X2 = x2_grid(65)
M = 8
CFG = IterationConfig(check_length=False)


def _cos(*pairs):
    coeffs = np.zeros(M + 1)
    for k, value in pairs:
        coeffs[k] = value
    return CosineSeries(coeffs)


def _data(amplitude: float) -> BoundaryData:
    return BoundaryData.zero(M).with_updates(
        du_en=_cos((1, amplitude)),
        dE_en=_cos((1, 0.5 * amplitude)),
        dPhi_ex=_cos((1, -0.5 * amplitude)),
        b_series=_cos((1, 0.2 * amplitude)),
    )


def _entropy_data(amplitude: float) -> BoundaryData:
    return BoundaryData.zero(M).with_updates(dS_en=_cos((1, amplitude)))


def _gap(a, b) -> float:
    return (a.psi - b.psi).h1_norm() + (a.Psi - b.Psi).h1_norm()


@pytest.fixture(scope="module")
def bg(gas_periodic):
    return integrate_background(gas_periodic, L=0.3, n1=257)


@pytest.fixture(scope="module")
def small(bg):
    return solve_irrotational(_data(1e-3), bg, CFG, X2)


@pytest.fixture(scope="module")
def rotational(bg):
    return solve_rotational(_entropy_data(1e-3), bg, CFG, X2)


def test_zero_data_returns_background(bg):
    bundle = solve_irrotational(BoundaryData.zero(M), bg, CFG, X2)
    d = bundle.diagnostics
    assert d.iterations == 1
    assert bundle.psi.h1_norm() < 1e-10 and bundle.Psi.h1_norm() < 1e-10
    assert d.potential_residual < 1e-10
    assert d.poisson_residual < 1e-10
    np.testing.assert_allclose(bundle.fields["u1"], np.broadcast_to(bg.u[:, None], bundle.fields["u1"].shape), atol=1e-12)
    np.testing.assert_allclose(bundle.fields["rho"], np.broadcast_to(bg.rho[:, None], bundle.fields["rho"].shape), rtol=1e-12)
    assert np.max(np.abs(bundle.fields["u2"])) < 1e-12
    assert d.max_pseudo_bernoulli < 1e-8
    assert np.max(np.abs(bundle.fields["omega_curl"])) < 1e-10


def test_small_data_converges(small):
    d = small.diagnostics
    assert d.iterations <= 10
    assert d.potential_residual < 1e-6
    assert d.poisson_residual < 1e-6
    assert d.supersonic_margin > 0.0
    assert d.max_pseudo_bernoulli < 1e-8
    assert small.psi.h1_norm() > 1e-5


def test_successive_differences_contract(small):
    history = small.diagnostics.history
    ratios = [b / a for a, b in zip(history, history[1:]) if b > 1e-13]
    assert ratios
    assert max(ratios) < 0.5


def test_supersonic_margin_tracks_background(small):
    d = small.diagnostics
    assert d.supersonic_margin == pytest.approx(d.background_margin, rel=0.2)


def test_mass_flux_is_conserved(small):
    assert small.diagnostics.mass_flux_drift < 1e-6


def test_initial_guess_does_not_matter(bg, small, rng):
    x1 = bg.grid
    bump = np.sin(np.pi * x1 / x1[-1])[None, :]
    guess = tuple(Field2D(1e-4 * rng.standard_normal((M + 1, 1)) * bump, x1) for _ in range(2))
    other = solve_irrotational(_data(1e-3), bg, CFG, X2, initial=guess)
    assert _gap(small, other) < 10 * CFG.fp_tol


def test_iterate_leaving_the_ball(bg):
    with pytest.raises(IterateEscapedSet):
        solve_irrotational(_data(1e-3), bg, CFG.model_copy(update={"delta": 1e-7}), X2)


def test_iteration_budget(bg):
    with pytest.raises(MaxIterExceeded):
        solve_irrotational(_data(1e-3), bg, CFG.model_copy(update={"max_iter": 1}), X2)


def test_length_beyond_critical(gas_equilibrium):
    long_bg = integrate_background(gas_equilibrium, L=1.2, n1=65)
    with pytest.raises(LengthExceedsCritical):
        solve_irrotational(BoundaryData.zero(M), long_bg, IterationConfig(), X2)


def test_v_en_parity_is_enforced():
    coeffs = np.zeros(2 * M)
    coeffs[0] = 1e-3
    with pytest.raises(ValidationError):
        BoundaryData.zero(M).with_updates(v_en=SineSeries(coeffs))


def test_rotational_reduces_to_irrotational(bg):
    data = _data(1e-3)
    rot = solve_rotational(data, bg, CFG, X2)
    irr = solve_irrotational(data, bg, CFG, X2)
    assert rot.phi.h1_norm() < 1e-9
    assert rot.Y.h1_norm() < 1e-9
    assert rot.diagnostics.outer_iterations == 1
    assert _gap(rot, irr) < 1e-8


def test_rotational_physics(rotational):
    d = rotational.diagnostics
    assert rotational.phi.h1_norm() > 0.0
    assert d.vorticity_residual < 1e-5
    assert d.transport_residual < 1e-5
    assert d.mass_flux_drift < 1e-6
    assert d.max_pseudo_bernoulli < 1e-8
    assert d.poisson_residual < 1e-6
    assert d.supersonic_margin > 0.0


def test_vorticity_codings_agree(rotational):
    assert rotational.diagnostics.vorticity_consistency < 1e-5


def test_entropy_follows_labels(rotational):
    labels = rotational.labels
    S = rotational.fields["S"]
    inlet = _cos((1, 1e-3)).evaluate(labels.labels.ravel()).reshape(S.shape)
    np.testing.assert_allclose(S - 1.0, inlet, rtol=0.0, atol=1e-14)


@pytest.mark.slow
def test_rotational_response_is_linear(bg, rotational):
    half = solve_rotational(_entropy_data(5e-4), bg, CFG, X2)
    assert rotational.phi.h1_norm() / half.phi.h1_norm() == pytest.approx(2.0, rel=0.1)
    assert rotational.Y.h1_norm() / half.Y.h1_norm() == pytest.approx(2.0, rel=0.1)


def test_tangential_inlet_velocity(bg):
    coeffs = np.zeros(2 * M)
    coeffs[1] = 1e-3
    data = BoundaryData.zero(M).with_updates(v_en=SineSeries(coeffs))
    bundle = solve_rotational(data, bg, CFG, X2)
    inlet_u2 = bundle.fields["u2"][0]
    np.testing.assert_allclose(inlet_u2, SineSeries(coeffs).evaluate(X2), atol=1e-8)


def test_stability_constants(bg):
    c_star, c_2star = measure_stability_constant(bg, M, X2)
    assert np.isfinite(c_star) and c_star > 0.0
    assert c_2star > 0.0
    cfg = configure_radii(bg, _entropy_data(1e-3), CFG, X2)
    assert cfg.c_star == pytest.approx(c_star)
    assert cfg.delta_e == pytest.approx(2.0 * c_2star * cfg.sigma)
    assert cfg.delta_p == pytest.approx(12.0 * c_star * cfg.delta_e + 4.0 * c_star * cfg.sigma)
    assert cfg.delta_v == pytest.approx(2.0 * c_star * cfg.delta_e)


def test_radii_for_zero_data(bg):
    cfg = configure_radii(bg, BoundaryData.zero(M), CFG, X2)
    assert cfg.sigma == 0.0
    assert cfg.delta_e is None


def test_empirical_stability_boundary(bg):
    cfg = CFG.model_copy(update={"delta": 0.05, "max_iter": 20})
    boundary = empirical_stability_boundary(bg, _data(1.0), cfg, amplitudes=(1e-4, 1e-3, 1.0), x2=X2)
    assert boundary.amplitude == 1e-3
    assert [ok for _, ok, _ in boundary.tried] == [True, True, False]


def test_exports(small):
    frame = fields_frame(small)
    assert len(frame) == small.x1.size * X2.size
    assert {"x1", "x2", "rho", "u1", "u2", "p", "S", "Phi", "psi", "Psi"} <= set(frame.columns)
    summary = orjson.loads(diagnostics_json(small))
    assert summary["iterations"] == small.diagnostics.iterations
    assert summary["grid"] == {"n1": small.x1.size, "n2": X2.size, "m": M}
    assert len(summary["history"]) == summary["iterations"]


def test_phi_lives_in_sine_basis(rotational):
    assert rotational.phi.kind is BasisKind.SINE
    assert rotational.phi.n_modes == 2 * M
