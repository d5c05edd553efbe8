import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slitcorr.curves import CorrelationCurve
from slitcorr.detection import (
    DetectionModel,
    apply_detection_model,
    finite_detector_average,
    joint_intensity,
    visibility,
)
from slitcorr.errors import ConfigError, NoFringeError
from slitcorr.fringes import count_fringes, fringe_period, local_maxima, refine_extremum
from slitcorr.model import ScanGrid
from slitcorr.quadrature import scan

IDEAL = DetectionModel(delta=0.0, eta=1.0)
FITTED = DetectionModel(delta=0.04, eta=0.66)


def g2_curve(values, x=None):
    x = np.linspace(-5e-3, 5e-3, len(values)) if x is None else x
    return CorrelationCurve(ScanGrid(x), values, "g2", "antisymmetric")


def cos2_curve(period, n=4001, half=10e-3, offset=0.0, kind="G1"):
    x = np.linspace(-half, half, n)
    y = offset + np.cos(np.pi * x / period) ** 2
    return CorrelationCurve(ScanGrid(x), y, kind, "intensity" if kind == "G1" else "antisymmetric")


def test_identity_model_leaves_curve(setup, slit, spectrum, grid):
    curve = scan(setup, slit, spectrum, None, grid, "g2", "antisymmetric")
    assert np.array_equal(apply_detection_model(curve, IDEAL).values, curve.values)


def test_fitted_parameters_on_ideal_values():
    assert FITTED.transform(2.0) == pytest.approx(1.4756, abs=1e-12)
    literal = DetectionModel(0.04, 0.66, interpretation="literal")
    assert literal.transform(1.0) == pytest.approx(1.4756, abs=1e-12)
    assert literal.transform(2.0) == pytest.approx(1.9112, abs=1e-12)


def test_detection_rejects_unnormalized(setup, slit, spectrum, grid):
    curve = scan(setup, slit, spectrum, None, grid, "G2", "antisymmetric")
    with pytest.raises(ValueError):
        apply_detection_model(curve, FITTED)


@pytest.mark.parametrize("kwargs", [dict(eta=0.0), dict(eta=1.2), dict(delta=-0.1),
                                    dict(detector_width=-1.0), dict(interpretation="other")])
def test_detection_model_validation(kwargs):
    with pytest.raises(ConfigError):
        DetectionModel(**kwargs)


def test_default_detector_width():
    assert DetectionModel().detector_width == pytest.approx(0.53e-3, rel=0.01)


def test_affine_preserves_extremum_positions(setup, slit, spectrum, grid):
    curve = scan(setup, slit, spectrum, None, grid, "g2", "antisymmetric")
    modified = apply_detection_model(curve, FITTED)
    assert np.array_equal(local_maxima(curve.values), local_maxima(modified.values))
    assert fringe_period(curve) == pytest.approx(fringe_period(modified), rel=1e-12)


def test_visibility_closed_form(setup, slit, spectrum, grid):
    curve = scan(setup, slit, spectrum, None, grid, "g2", "antisymmetric")
    ideal = visibility(curve)
    big, small = ideal.max_value, ideal.min_value
    e2, d = FITTED.eta ** 2, FITTED.delta
    expected = e2 * (big - small) / (2 * (1 + d) + e2 * (big + small - 2))
    assert visibility(apply_detection_model(curve, FITTED)).v == pytest.approx(expected, rel=1e-12)


def test_finite_detector_identity_and_constants():
    curve = cos2_curve(2e-3)
    assert finite_detector_average(curve, 0.0) is curve
    flat = CorrelationCurve(curve.grid, np.full(len(curve.grid), 1.7), "G1", "intensity")
    assert np.allclose(finite_detector_average(flat, 0.9e-3).values, 1.7, rtol=1e-14)
    with pytest.raises(ValueError):
        finite_detector_average(curve, 1.0)


def test_top_hat_attenuation():
    # a cos^2 fringe averaged over half a period keeps sinc(pi/2) = 2/pi of its
    # visibility; the linear interpolant adds its own sinc^2(k h / 2) damping
    period = 2e-3
    curve = cos2_curve(period, n=8001)
    averaged = finite_detector_average(curve, period / 2)
    window = (-period, period)
    half_kh = np.pi / period * curve.grid.step
    expected = 2 / math.pi * (math.sin(half_kh) / half_kh) ** 2
    assert visibility(curve, window).v == pytest.approx(1.0, abs=1e-12)
    assert visibility(averaged, window).v == pytest.approx(expected, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(
    amps=st.lists(st.floats(0.05, 1.0), min_size=1, max_size=3),
    periods=st.lists(st.floats(0.5e-3, 4e-3), min_size=3, max_size=3),
    width=st.floats(0.05e-3, 2e-3),
)
def test_averaging_never_increases_visibility(amps, periods, width):
    x = np.linspace(-6e-3, 6e-3, 1201)
    y = 4.0 + sum(a * np.cos(2 * np.pi * x / p) for a, p in zip(amps, periods))
    curve = CorrelationCurve(ScanGrid(x), y, "G1", "intensity")
    window = (x[0], x[-1])
    before = visibility(curve, window).v
    after = visibility(finite_detector_average(curve, width), window).v
    assert after <= before + 1e-12


def test_detection_and_averaging_commute(setup, slit, spectrum, grid):
    curve = scan(setup, slit, spectrum, None, grid, "g2", "antisymmetric")
    a = finite_detector_average(apply_detection_model(curve, FITTED), FITTED.detector_width)
    b = apply_detection_model(finite_detector_average(curve, FITTED.detector_width), FITTED)
    assert np.max(np.abs(a.values - b.values)) < 1e-12


def test_visibility_coherent_fringe_is_one(setup, slit):
    zero = setup.wavelength * setup.distance_z / (2 * slit.slit_separation_d)
    x = np.linspace(-2 * zero, 2 * zero, 401)  # contains the dark fringes exactly
    curve = scan(setup, slit, None, None, ScanGrid(x), "G1", "intensity", source="coherent")
    result = visibility(curve)
    assert result.v == pytest.approx(1.0, abs=1e-12)
    assert result.x_max == 0.0
    assert abs(abs(result.x_min) - zero) < 1e-12


def test_visibility_errors():
    flat = g2_curve(np.full(51, 1.3))
    with pytest.raises(NoFringeError):
        visibility(flat)
    with pytest.raises(NoFringeError):
        visibility(flat, (-1e-3, 1e-3))
    with pytest.raises(NoFringeError):
        visibility(cos2_curve(2e-3), (20e-3, 30e-3))
    ramp = g2_curve(np.linspace(1.0, 2.0, 51))
    with pytest.raises(NoFringeError):
        visibility(ramp, (-5e-3, 5e-3))


def test_joint_intensity(setup, slit, spectrum, grid):
    g = apply_detection_model(scan(setup, slit, spectrum, None, grid, "g2", "antisymmetric"), FITTED)
    prod = np.linspace(1.0, 2.0, len(grid))
    out = joint_intensity(g, prod)
    assert out.kind == "G2"
    assert np.allclose(out.values, g.values * prod)


def test_parabolic_refinement():
    x = np.linspace(0, 1, 11)
    y = -(x - 0.537) ** 2
    assert refine_extremum(x, y, int(np.argmax(y))) == pytest.approx(0.537, abs=1e-12)


def test_principal_fringe_counting(setup, slit, spectrum, broadband, grid):
    coherent = scan(setup, slit, None, None, grid, "G1", "intensity", source="coherent")
    assert count_fringes(coherent) == 3
    moderate = scan(setup, slit, spectrum, None, grid, "g2", "antisymmetric")
    assert count_fringes(moderate) == 5
    wide = scan(setup, slit, broadband, None, grid, "g2", "antisymmetric")
    assert count_fringes(wide) == 3
    thermal = scan(setup, slit, spectrum, None, grid, "G1", "intensity")
    assert count_fringes(thermal) == 1
