import math
from dataclasses import replace

import numpy as np
import pytest

from nozzle_solver.core.errors import GridMismatch, LengthExceedsCritical, NotApplicable
from nozzle_solver.linearize import BarCoeffs
from nozzle_solver.multiplier import (
    RiccatiCase,
    RiccatiConstants,
    accelerating_report,
    build_weight,
    constants_for,
    critical_length,
    riccati_constants,
    verify_pointwise_conditions,
    weight_at,
    weight_frame,
)


@pytest.fixture(scope="module")
def rc_equilibrium(bg_equilibrium):
    return riccati_constants(bg_equilibrium, 0.0)


def _relative_residual(w):
    scale = np.maximum(1.0, w.constants.a2 * w.W ** 2)
    return np.max(np.abs(w.residual()) / scale)


def test_equilibrium_constants(bg_equilibrium, rc_equilibrium):
    bar = BarCoeffs.from_background(bg_equilibrium)
    rc = rc_equilibrium
    expected_a2 = 2.0 * (bar.b1 ** 2 + bar.b2 ** 2 / bar.mu1L)
    np.testing.assert_allclose(expected_a2, expected_a2[0], rtol=1e-12)
    assert rc.a2 == pytest.approx(expected_a2[0], rel=1e-12)
    assert rc.a0 == pytest.approx(2.0 * bar.h2[0] ** 2 / bar.mu1L, rel=1e-12)
    assert rc.a1 == pytest.approx(0.0, abs=1e-12)
    assert rc.case is RiccatiCase.POSITIVE_DISCRIMINANT


def test_constants_monotone_in_delta(bg_periodic):
    small = riccati_constants(bg_periodic, 0.01)
    large = riccati_constants(bg_periodic, 0.02)
    assert large.a0 >= small.a0
    assert large.a2 >= small.a2
    assert large.a1 <= small.a1


def test_accelerating_window_has_positive_a1(gas_periodic):
    rc = constants_for(gas_periodic, 0.0, eps0=0.05, n1=257, accelerating=True)
    assert rc.a1 > 0.0


def test_equilibrium_critical_length(rc_equilibrium):
    result = critical_length(rc_equilibrium)
    assert result.case is RiccatiCase.POSITIVE_DISCRIMINANT
    expected = 0.5 * math.pi / math.sqrt(rc_equilibrium.a0 * rc_equilibrium.a2)
    assert result.length == pytest.approx(expected, rel=1e-6)
    assert result.length == pytest.approx(0.97, abs=0.01)


def test_non_positive_discriminant_lengths():
    relaxed = RiccatiConstants(a0=1.0, a1=2.0, a2=1.0, t_bound=3.0)
    assert relaxed.case is RiccatiCase.NON_POSITIVE_DISCRIMINANT
    assert critical_length(relaxed).length == 3.0
    binding = RiccatiConstants(a0=1.0, a1=-2.0, a2=1.0, t_bound=100.0)
    assert critical_length(binding).length == pytest.approx(0.5)


def test_case1_length_decreases_with_a2():
    rc = RiccatiConstants(a0=8.0, a1=-0.3, a2=0.3)
    stiffer = rc.with_updates(a2=0.6)
    assert rc.case is stiffer.case is RiccatiCase.POSITIVE_DISCRIMINANT
    assert critical_length(stiffer).length < critical_length(rc).length


def test_critical_length_respects_clamp(gas_periodic):
    rc = constants_for(gas_periodic, 0.0, eps0=0.1, n1=257)
    assert math.isfinite(rc.t_bound)
    assert critical_length(rc).length <= rc.t_bound


def test_build_weight_equilibrium(bg_equilibrium, rc_equilibrium):
    w = build_weight(rc_equilibrium, bg_equilibrium.L, bg_equilibrium.grid)
    assert w.lambda0 == pytest.approx(rc_equilibrium.lambda1_star)
    assert np.all(w.W > 0.0)
    assert _relative_residual(w) < 1e-9
    report = verify_pointwise_conditions(w, BarCoeffs.from_background(bg_equilibrium), 0.0)
    assert report.lambda0 == w.lambda0
    assert report.passed


def test_scaled_weight_fails_conditions(bg_equilibrium, rc_equilibrium):
    w = build_weight(rc_equilibrium, bg_equilibrium.L, bg_equilibrium.grid)
    broken = replace(w, W=10.0 * w.W, dW=10.0 * w.dW)
    assert not verify_pointwise_conditions(broken, BarCoeffs.from_background(bg_equilibrium), 0.0).passed


def test_length_beyond_critical_is_rejected(rc_equilibrium):
    with pytest.raises(LengthExceedsCritical):
        build_weight(rc_equilibrium, 1.0)


def test_weight_blows_up_as_lambda_vanishes(rc_equilibrium):
    assert weight_at(rc_equilibrium, 1e-4, 0.0) > weight_at(rc_equilibrium, 1e-2, 0.0)


def test_case2_limit_and_weight():
    rc = RiccatiConstants(a0=0.2, a1=0.5, a2=1.0)
    assert rc.case is RiccatiCase.NON_POSITIVE_DISCRIMINANT
    L = 0.4
    W_L = weight_at(rc, rc.a_star + 1e-12, L)
    assert W_L == pytest.approx((1.0 / L + rc.a1) / rc.a2, rel=1e-4)

    decelerating = RiccatiConstants(a0=0.2, a1=-1.0, a2=1.0)
    w = build_weight(decelerating, 0.5, np.linspace(0.0, 0.5, 201))
    assert w.lambda0 > decelerating.a_star
    assert np.all(w.W > 0.0)
    assert _relative_residual(w) < 1e-9
    with pytest.raises(LengthExceedsCritical):
        build_weight(decelerating, 1.0)


def test_closed_forms_agree_across_discriminant_sign():
    x = np.linspace(0.0, 0.5, 51)
    plus = RiccatiConstants(a0=0.25 + 1e-6, a1=0.5, a2=1.0)
    minus = RiccatiConstants(a0=0.25 - 1e-6, a1=0.5, a2=1.0)
    assert plus.case is not minus.case
    W_plus = weight_at(plus, 0.1, x)
    W_minus = weight_at(minus, 0.1, x)
    assert np.max(np.abs(W_plus - W_minus)) <= 1e-3 * np.max(np.abs(W_plus))


def test_accelerating_bounds(gas_periodic):
    report = accelerating_report(gas_periodic, 0.0, eps0=0.05, n1=257)
    assert report.accelerating_length_t_star >= report.generic_length
    assert report.accelerating_length_t_max >= report.accelerating_length_t_star
    assert report.t_max_bound > report.t_star_bound
    assert list(report.to_frame()["bound"])[0] == "generic"


def test_accelerating_report_needs_positive_field(gas_equilibrium):
    with pytest.raises(NotApplicable):
        accelerating_report(gas_equilibrium, 0.0, eps0=0.05)


def test_weight_frame_and_grid_mismatch(bg_equilibrium, bg_periodic, rc_equilibrium):
    w = build_weight(rc_equilibrium, bg_equilibrium.L, bg_equilibrium.grid)
    frame = weight_frame(w, BarCoeffs.from_background(bg_equilibrium))
    assert list(frame.columns) == ["x1", "W", "q1_minus_q3", "q2_over_a22"]
    assert frame["q1_minus_q3"].min() >= w.lambda0 * (1 - 1e-9)
    shorter = build_weight(rc_equilibrium, 0.4, np.linspace(0.0, 0.4, 129))
    with pytest.raises(GridMismatch):
        verify_pointwise_conditions(shorter, BarCoeffs.from_background(bg_periodic), 0.0)
