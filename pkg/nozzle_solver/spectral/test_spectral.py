import math

import numpy as np
import pytest
from scipy.integrate import cumulative_trapezoid, quad

from nozzle_solver.core.errors import TruncationTooHigh
from nozzle_solver.spectral import (
    BasisKind,
    CosineSeries,
    Field2D,
    SineSeries,
    basis_matrix,
    check_compatibility,
    phi_en,
    project,
    quadrature_weights,
    x2_grid,
)

X2 = x2_grid(257)


@pytest.mark.parametrize("kind, n_modes", [(BasisKind.COSINE, 65), (BasisKind.SINE, 64)])
def test_orthonormality(kind, n_modes):
    B = basis_matrix(kind, n_modes, X2)
    gram = (B * quadrature_weights(X2)) @ B.T
    np.testing.assert_allclose(gram, np.eye(n_modes), atol=1e-12)


def test_project_basis_function_and_constant():
    c = project(np.cos(3 * np.pi * X2), X2, BasisKind.COSINE, 16).coeffs
    assert c[3] == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(np.delete(c, 3))) < 1e-12
    c = project(np.ones_like(X2), X2, BasisKind.COSINE, 16).coeffs
    assert c[0] == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert np.max(np.abs(c[1:])) < 1e-12


def test_truncation_guard():
    with pytest.raises(TruncationTooHigh):
        project(np.ones(33), x2_grid(33), BasisKind.COSINE, 16)
    project(np.ones(65), x2_grid(65), BasisKind.COSINE, 16)


def test_parseval_for_analytic_function():
    f = np.exp(np.cos(np.pi * X2))
    c = project(f, X2, BasisKind.COSINE, 32).coeffs
    exact, _ = quad(lambda s: math.exp(2.0 * math.cos(math.pi * s)), -1.0, 1.0, epsabs=1e-14, epsrel=1e-14)
    assert abs(np.sum(c ** 2) - exact) < 1e-10


def test_round_trip_band_limited(rng):
    for kind, series in [
        (BasisKind.COSINE, CosineSeries(rng.normal(size=17))),
        (BasisKind.SINE, SineSeries(rng.normal(size=16))),
    ]:
        back = project(series.evaluate(X2), X2, kind, 16)
        np.testing.assert_allclose(back.coeffs, series.coeffs, atol=1e-12)


def test_even_derivative_stays_in_basis():
    series = CosineSeries(np.eye(8)[5])
    second = series.derivative(2)
    np.testing.assert_allclose(second.evaluate(X2), -(5 * np.pi) ** 2 * np.cos(5 * np.pi * X2), atol=1e-9)
    with pytest.raises(ValueError):
        series.derivative(1)


def test_cosine_odd_derivatives_vanish_at_walls(rng):
    series = CosineSeries(rng.normal(size=17))
    walls = np.array([-1.0, 1.0])
    assert np.max(np.abs(series.derivative(1, walls))) < 1e-11
    assert np.max(np.abs(series.derivative(3, walls))) < 1e-8


def test_spectral_accuracy():
    f = 1.0 / (1.5 + np.cos(np.pi * X2))

    def error(m):
        return np.max(np.abs(project(f, X2, BasisKind.COSINE, m).evaluate(X2) - f))

    assert error(16) / error(8) < 0.1


def test_phi_en_construction():
    v = SineSeries(np.array([1.0, 0.0, 0.3]))
    assert v.antiderivative(np.array([-1.0]))[0] == 0.0
    reference = cumulative_trapezoid(v.evaluate(X2), X2, initial=0.0)
    np.testing.assert_allclose(v.antiderivative(X2), reference, atol=1e-4)

    # x2-odd tangential data keeps the potential trace in the cosine basis
    symmetric = SineSeries(np.array([0.0, 1.0, 0.0, 0.3]))
    phi = phi_en(symmetric, X2, 16)
    assert phi.evaluate(np.array([-1.0]))[0] == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(phi.evaluate(X2, 1), symmetric.evaluate(X2), atol=1e-10)


def test_compatibility_of_series_data(rng):
    report = check_compatibility(
        {
            "u_en": CosineSeries(rng.normal(size=9)),
            "E_en": CosineSeries(rng.normal(size=9)),
            "Phi_ex": CosineSeries(rng.normal(size=9)),
            "S_en": CosineSeries(rng.normal(size=9)),
            "v_en": SineSeries(rng.normal(size=8)),
            "b": CosineSeries(rng.normal(size=9)),
        }
    )
    assert report.passed
    assert len(report.checks) == 11


def test_compatibility_flags_linear_profile():
    report = check_compatibility({"u_en": lambda s: s})
    first = report.for_datum("u_en")[0]
    assert first.order == 1 and not first.passed
    assert first.measured == pytest.approx((1.0, 1.0), rel=1e-10)
    assert not report.passed


def test_compatibility_of_sine_profile():
    report = check_compatibility({"v_en": lambda s: np.sin(0.5 * np.pi * (s + 1.0))})
    assert [c.order for c in report.checks] == [0, 2]
    assert report.passed


def test_field_norms_and_x1_derivative():
    x1 = np.linspace(0.0, 1.0, 101)
    modes = np.zeros((4, x1.size))
    modes[1] = 1.0
    f = Field2D(modes, x1)
    assert f.l2_norm() == pytest.approx(1.0, rel=1e-12)
    assert f.h1_norm() == pytest.approx(math.sqrt(1.0 + math.pi ** 2), rel=1e-12)
    modes[2] = x1 ** 2
    d = Field2D(modes, x1).dx1()
    np.testing.assert_allclose(d.modes[2], 2.0 * x1, atol=1e-12)
    values = Field2D(modes, x1).values(X2)
    assert values.shape == (101, 257)
    back = Field2D.from_grid(values, x1, X2, BasisKind.COSINE, 3)
    np.testing.assert_allclose(back.modes, modes, atol=1e-12)
