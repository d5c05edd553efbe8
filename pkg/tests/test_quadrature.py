import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slitcorr.errors import DegenerateDenominatorError, UnderResolvedError
from slitcorr.model import DoubleSlit, GaussianSpectrum, OpticalSetup, ScanGrid, aperture_transfer
from slitcorr.quadrature import (
    QuadratureConfig,
    broadband_g2,
    broadband_g2_normalized,
    g1_coherent,
    g1_thermal,
    g2_coherent,
    g2_coherent_normalized,
    g2_normalized,
    g2_thermal,
    gamma_cross,
    scan,
)

# Cross integral int T(kx1/z - q) T(kx2/z - q) S(q) dq at the default geometry,
# computed with mpmath adaptive quadrature (30 digits) split at multiples of w.
MPMATH_CROSS = {
    (0.52, 0.0, 0.0): 5.5864967371220094e-10,
    (0.52, 1e-3, 1e-3): 5.4131367534767014e-10,
    (0.52, 3e-3, 3e-3): 4.2137380638958303e-10,
    (0.52, 1e-3, -1e-3): -1.1582148491945621e-10,
    (0.52, 2e-3, 0.0): -1.1218319349122386e-10,
    (0.1, 0.0, 0.0): 1.4381994414723616e-9,
    (0.1, 1e-3, 1e-3): 8.0536801728127229e-10,
    (0.1, 3e-3, 3e-3): 5.113113366072008e-10,
    (0.1, 1e-3, -1e-3): 2.6666155115750023e-10,
    (0.1, 2e-3, 0.0): -2.3213950111401156e-10,
}


@pytest.mark.parametrize("key", sorted(MPMATH_CROSS))
def test_cross_integral_matches_adaptive_oracle(setup, slit, key):
    normalized, x1, x2 = key
    spec = GaussianSpectrum.from_normalized(normalized, slit)
    got = gamma_cross(setup, slit, spec, None, x1, x2)
    assert got == pytest.approx(MPMATH_CROSS[key], rel=1e-10)


def test_simpson_weights_integrate_cubic_exactly():
    quad = QuadratureConfig(2.0, 11)
    q = quad.nodes()
    assert quad.weights() @ (q ** 3 + 3 * q ** 2 + 1) == pytest.approx(2 * 8.0 + 4.0)


def test_quadrature_config_validation(slit, spectrum):
    with pytest.raises(UnderResolvedError):
        QuadratureConfig(1e5, 10)
    with pytest.raises(UnderResolvedError):
        QuadratureConfig(1e5, 1)
    coarse = QuadratureConfig(8 * spectrum.bandwidth_w, 101)
    with pytest.raises(UnderResolvedError):
        coarse.check(slit, spectrum)
    with pytest.raises(UnderResolvedError):
        g1_thermal(OpticalSetup(), slit, spectrum, coarse, 0.0)


@pytest.mark.parametrize("normalized", [1e-4, 0.52, 10.0])
def test_default_config_has_margin(slit, normalized):
    spec = GaussianSpectrum.from_normalized(normalized, slit)
    quad = QuadratureConfig.for_problem(slit, spec)
    quad.check(slit, spec)
    assert quad.n_points % 2 == 1
    assert quad.step <= min(2 * math.pi / slit.slit_separation_d, spec.bandwidth_w) / 32


def test_g1_thermal_single_humped(setup, slit, spectrum, grid):
    g1 = g1_thermal(setup, slit, spectrum, None, grid.positions)
    interior = (g1[1:-1] > g1[:-2]) & (g1[1:-1] > g1[2:])
    assert np.flatnonzero(interior).tolist() == [109]  # grid index 110 is x = 0
    assert np.allclose(g1, g1[::-1], rtol=1e-12, atol=0)


def test_narrowband_limit_collapses_to_coherent(setup, slit):
    spec = GaussianSpectrum.from_normalized(1e-4, slit)
    assert g1_thermal(setup, slit, spec, None, 0.0) == pytest.approx(
        g1_coherent(setup, slit, 0.0), rel=1e-3
    )


def test_gamma_cross_reduces_and_is_symmetric(setup, slit, spectrum):
    x = 1.3e-3
    assert gamma_cross(setup, slit, spectrum, None, x, x) == pytest.approx(
        g1_thermal(setup, slit, spectrum, None, x) / setup.amplitude_A, rel=1e-14
    )
    assert gamma_cross(setup, slit, spectrum, None, 0.7e-3, -2.1e-3) == gamma_cross(
        setup, slit, spectrum, None, -2.1e-3, 0.7e-3
    )


def test_amplitude_scaling(slit, spectrum):
    a = OpticalSetup(amplitude_A=3.0)
    one = OpticalSetup()
    assert g1_thermal(a, slit, spectrum, None, 1e-3) == pytest.approx(
        3 * g1_thermal(one, slit, spectrum, None, 1e-3), rel=1e-14)
    assert g2_thermal(a, slit, spectrum, None, 1e-3, -1e-3) == pytest.approx(
        9 * g2_thermal(one, slit, spectrum, None, 1e-3, -1e-3), rel=1e-14)
    assert gamma_cross(a, slit, spectrum, None, 1e-3, 0.0) == gamma_cross(
        one, slit, spectrum, None, 1e-3, 0.0)


def test_coincident_points_double(setup, slit, spectrum, grid):
    x = grid.positions
    g1 = g1_thermal(setup, slit, spectrum, None, x)
    assert np.allclose(g2_thermal(setup, slit, spectrum, None, x, x), 2 * g1 ** 2, rtol=1e-14)
    assert g2_thermal(setup, slit, spectrum, None, 0.0, 0.0) == pytest.approx(
        2 * g1_thermal(setup, slit, spectrum, None, 0.0) ** 2, rel=1e-14)
    assert np.allclose(g2_normalized(setup, slit, spectrum, None, x, x), 2.0, rtol=0, atol=1e-9)


def test_broadband_antisymmetric_follows_reference(setup, slit, broadband, grid):
    x = grid.positions
    g2 = g2_normalized(setup, slit, broadband, None, x, -x)
    ref = broadband_g2_normalized(setup, slit, x, -x)
    assert np.max(np.abs(g2 - ref)) < 0.02
    assert 1.0 <= g2.min() < 1.01 and g2.max() == pytest.approx(2.0, abs=1e-12)


def test_broadband_cross_term_period(setup, slit, broadband):
    # Gamma(x, -x)^2 / (G1 G1) tracks T(2kx/z)^2 / T(0)^2, whose cos factor has
    # zeros spaced lambda z / (2 d) apart in x.
    period = setup.wavelength * setup.distance_z / (2 * slit.slit_separation_d)
    assert period == pytest.approx(1.7400e-3, rel=1e-3)
    zeros = period * (np.arange(4) + 0.5)
    g = g2_normalized(setup, slit, broadband, None, zeros, -zeros)
    assert np.all(np.abs(g - 1.0) < 0.02)
    peak = g2_normalized(setup, slit, broadband, None, 0.0, 0.0)
    assert peak == pytest.approx(2.0, abs=1e-12)


def test_broadband_reference(setup, slit):
    t0 = aperture_transfer(slit, 0.0)
    assert broadband_g2(setup, slit, 1e-3, 1e-3) == pytest.approx(2 * t0 ** 2, rel=1e-14)
    zero = setup.wavelength * setup.distance_z / (2 * slit.slit_separation_d)
    assert broadband_g2(setup, slit, zero, 0.0) == pytest.approx(t0 ** 2, rel=1e-12)
    x = np.arange(-12, 13) * (zero / 4)  # contains the zeros at x - (-x) = zero
    v = broadband_g2(setup, slit, x, -x)
    assert v.max() / v.min() == pytest.approx(2.0, rel=1e-9)


def test_coherent_closed_forms(setup, slit, grid):
    t0 = aperture_transfer(slit, 0.0)
    assert g1_coherent(setup, slit, 0.0) == pytest.approx(t0 ** 2, rel=1e-15)
    zero = setup.wavelength * setup.distance_z / (2 * slit.slit_separation_d)
    assert zero == pytest.approx(1.7400e-3, rel=1e-3)
    assert g1_coherent(setup, slit, zero) < 1e-25 * t0 ** 2
    x = grid.positions
    g1 = g1_coherent(setup, slit, x)
    assert np.allclose(g2_coherent(setup, slit, x, x), g1 ** 2, rtol=1e-15)
    assert np.array_equal(g2_coherent(setup, slit, x, -x), g2_coherent(setup, slit, x, x))
    assert np.allclose(g2_coherent_normalized(setup, slit, x, -x), 1.0, rtol=0, atol=1e-12)


def test_coherent_fringe_spacing(setup, slit):
    # Fringe maxima of the cos^2 factor are lambda z / d apart; on the envelope
    # they shift slightly inward, so check the pure interference factor.
    period = setup.wavelength * setup.distance_z / slit.slit_separation_d
    assert period == pytest.approx(3.4804e-3, rel=1e-4)
    x = np.array([0.0, period, 2 * period])
    cos_factor = np.cos(setup.wavenumber * x * slit.slit_separation_d / (2 * setup.distance_z))
    assert np.allclose(np.abs(cos_factor), 1.0, atol=1e-12)


def test_degenerate_denominator(setup, slit, spectrum):
    zero = setup.wavelength * setup.distance_z / (2 * slit.slit_separation_d)
    with pytest.raises(DegenerateDenominatorError):
        g2_coherent_normalized(setup, slit, zero, 0.0)
    # an almost plane-wave spectrum leaves the coherent zero dark
    needle = GaussianSpectrum.from_normalized(1e-13, slit)
    with pytest.raises(DegenerateDenominatorError):
        g2_normalized(setup, slit, needle, None, np.array([0.0, zero]), np.zeros(2))


def test_refinement_self_consistency(setup, slit, spectrum, grid):
    quad = QuadratureConfig.for_problem(slit, spectrum)
    x = grid.positions
    for fn in (lambda q: g1_thermal(setup, slit, spectrum, q, x),
               lambda q: g2_thermal(setup, slit, spectrum, q, x, -x)):
        coarse, fine = fn(quad), fn(quad.refined())
        assert np.max(np.abs(fine / coarse - 1)) < 1e-8


def test_scan_modes(setup, slit, spectrum, grid):
    x = grid.positions
    sym = scan(setup, slit, spectrum, None, grid, "g2", "symmetric")
    assert np.ptp(sym.values) < 1e-6 and np.allclose(sym.values, 2.0, atol=1e-6)
    anti = scan(setup, slit, spectrum, None, grid, "G2", "antisymmetric")
    assert np.allclose(anti.values, g2_thermal(setup, slit, spectrum, None, x, -x), rtol=1e-14)
    fixed = scan(setup, slit, spectrum, None, grid, "g2", "fixed_zero")
    assert np.allclose(fixed.values, g2_normalized(setup, slit, spectrum, None, x, 0.0 * x))
    coh = scan(setup, slit, None, None, grid, "G1", "intensity", source="coherent")
    assert np.array_equal(coh.values, g1_coherent(setup, slit, x))
    with pytest.raises(ValueError):
        scan(setup, slit, spectrum, None, grid, "G1", "antisymmetric")
    with pytest.raises(ValueError):
        scan(setup, slit, spectrum, None, grid, "g2", "diagonal")


@settings(max_examples=40, deadline=None)
@given(
    x1=st.floats(-5e-3, 5e-3),
    x2=st.floats(-5e-3, 5e-3),
    normalized=st.sampled_from([0.05, 0.2, 0.52, 1.0, 3.0]),
)
def test_gaussian_moment_structure(x1, x2, normalized):
    setup, slit = OpticalSetup(), DoubleSlit()
    spec = GaussianSpectrum.from_normalized(normalized, slit)
    g2 = g2_thermal(setup, slit, spec, None, x1, x2)
    product = g1_thermal(setup, slit, spec, None, x1) * g1_thermal(setup, slit, spec, None, x2)
    gam = gamma_cross(setup, slit, spec, None, x1, x2)
    assert g2 - product == pytest.approx(gam ** 2, rel=1e-9, abs=1e-12 * product)
    assert g2 - product >= -1e-15 * product
    g = g2_normalized(setup, slit, spec, None, x1, x2)
    assert 1.0 <= g <= 2.0 + 1e-12
    assert g2_normalized(setup, slit, spec, None, x1, x1) == pytest.approx(2.0, abs=1e-9)


def test_narrowband_sup_norm(setup, slit, grid):
    spec = GaussianSpectrum.from_normalized(1e-4, slit)
    thermal = g1_thermal(setup, slit, spec, None, grid.positions)
    coherent = g1_coherent(setup, slit, grid.positions)
    assert np.max(np.abs(thermal - coherent)) / np.max(coherent) < 1e-3


def test_scan_grid_independent_of_chunking(setup, slit, spectrum):
    x = np.linspace(-5e-3, 5e-3, 3000)
    full = g1_thermal(setup, slit, spectrum, None, x)
    parts = np.concatenate([g1_thermal(setup, slit, spectrum, None, p) for p in np.split(x, 3)])
    assert np.array_equal(full, parts)
    assert isinstance(ScanGrid(x), ScanGrid)
