import math

import numpy as np
import pytest

from nozzle_solver.core.errors import DivergenceTooLarge, GridMismatch, NonMonotoneStream
from nozzle_solver.nonlinear import streamfunction, transport_solve
from nozzle_solver.spectral import CosineSeries, x2_grid

J0 = math.sqrt(2.0)
X1 = np.linspace(0.0, 0.3, 41)
X2 = x2_grid(65)
M = 8


def _series(*pairs):
    coeffs = np.zeros(M + 1)
    for k, value in pairs:
        coeffs[k] = value
    return CosineSeries(coeffs)


def _uniform():
    M1 = np.full((X1.size, X2.size), J0)
    return M1, np.zeros_like(M1)


def _sheared(amplitude=0.05):
    """Divergence-free momentum of w = J0 (x2 + 1) + a sin(pi x1) (x2^2 - 1)."""
    s = np.sin(np.pi * X1)[:, None]
    M1 = J0 + 2.0 * amplitude * s * X2[None, :]
    M2 = -amplitude * np.pi * np.cos(np.pi * X1)[:, None] * (X2[None, :] ** 2 - 1.0)
    return M1, M2


def test_streamfunction_vanishes_on_lower_wall():
    w = streamfunction(_uniform()[0], X2)
    assert np.all(w[:, 0] == 0.0)
    np.testing.assert_allclose(w[:, -1], 2.0 * J0, rtol=1e-14)


def test_inlet_labels_are_identity():
    _, lagrangian = transport_solve(_sheared(), _series((1, 1e-3)), X1, X2)
    np.testing.assert_allclose(lagrangian.labels[0], X2, rtol=0.0, atol=1e-12)


def test_zero_inlet_entropy_gives_zero():
    Y, lagrangian = transport_solve(_sheared(), CosineSeries.zeros(M), X1, X2)
    assert np.all(lagrangian.entropy == 0.0)
    assert Y.h1_norm() == 0.0


def test_uniform_flow_closed_form():
    dS = _series((1, 1e-3), (2, -5e-4))
    Y, lagrangian = transport_solve(_uniform(), dS, X1, X2)
    np.testing.assert_allclose(lagrangian.labels, np.broadcast_to(X2, lagrangian.labels.shape), atol=1e-10)
    expected = np.broadcast_to(dS.evaluate(X2), lagrangian.entropy.shape)
    np.testing.assert_allclose(lagrangian.entropy, expected, rtol=0.0, atol=1e-10)
    np.testing.assert_allclose(Y.values(X2), expected, rtol=0.0, atol=1e-10)
    assert lagrangian.flux_drift == pytest.approx(0.0, abs=1e-14)


def test_sheared_flow_labels():
    amplitude = 0.05
    _, lagrangian = transport_solve(_sheared(amplitude), _series((1, 1e-3)), X1, X2)
    # inverting the linear inlet streamfunction is exact for piecewise-cubic monotone interpolation
    expected = X2[None, :] + amplitude * np.sin(np.pi * X1)[:, None] * (X2[None, :] ** 2 - 1.0) / J0
    np.testing.assert_allclose(lagrangian.labels, expected, atol=1e-12)
    assert np.all(np.abs(lagrangian.labels) <= 1.0)


def test_entropy_is_constant_along_streamlines():
    dS = _series((1, 1e-3))
    _, lagrangian = transport_solve(_sheared(), dS, X1, X2)
    np.testing.assert_allclose(lagrangian.entropy, dS.evaluate(lagrangian.labels.ravel()).reshape(lagrangian.labels.shape))


def test_negative_momentum_patch_is_rejected():
    M1, M2 = _uniform()
    M1[20:24, 30:34] = -0.1
    with pytest.raises(NonMonotoneStream):
        transport_solve((M1, M2), _series((1, 1e-3)), X1, X2)


def test_compressive_momentum_is_rejected():
    M1 = J0 * (1.0 + X1)[:, None] * np.ones(X2.size)[None, :]
    with pytest.raises(DivergenceTooLarge):
        transport_solve((M1, np.zeros_like(M1)), _series((1, 1e-3)), X1, X2)


def test_mismatched_grid():
    M1, M2 = _uniform()
    with pytest.raises(GridMismatch):
        transport_solve((M1[:, :-1], M2[:, :-1]), _series((1, 1e-3)), X1, X2)
