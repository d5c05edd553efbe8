"""First- and second-order correlations of the double-slit pattern by quadrature.

For a chaotic source with spatial spectrum S(q) the detection-plane
correlations are one-dimensional integrals over the source spatial
frequency q::

    G1(x)      = A   * int T(kx/z - q)^2 S(q) dq
    Gamma(x1,x2) =     int T(kx1/z - q) T(kx2/z - q) S(q) dq
    G2(x1, x2) = A^2 * [ G1(x1) G1(x2) / A^2 + Gamma(x1, x2)^2 ]

where T is :func:`slitcorr.model.aperture_transfer`. All integrals use the
composite Simpson rule on a uniform q grid (see :class:`QuadratureConfig`).
The coherent closed forms and the broadband reference limit live here too.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import CorrelationCurve, check_request, detector_pairs
from .errors import DegenerateDenominatorError, UnderResolvedError
from .model import (
    DoubleSlit,
    GaussianSpectrum,
    OpticalSetup,
    ScanGrid,
    aperture_transfer,
    reduced_frequency,
    spectrum_value,
)

# Spectrum support kept on each side, in units of the rms bandwidth.
SUPPORT_SIGMAS = 8.0
# Steps per min(2 pi / d, w) demanded by the resolution check.
STEPS_PER_SCALE = 16
# Marginal intensities below this fraction of T(0)^2 are treated as zero.
DEGENERATE_RTOL = 1e-24

_CHUNK_ELEMENTS = 2_000_000


def max_step(slit: DoubleSlit, spec: GaussianSpectrum) -> float:
    """Largest q step that still resolves both the fringes and the spectrum."""
    return min(2.0 * math.pi / slit.slit_separation_d, spec.bandwidth_w) / STEPS_PER_SCALE


@dataclass(frozen=True)
class QuadratureConfig:
    """Uniform Simpson grid on ``[-q_half_range, q_half_range]`` with ``n_points`` nodes."""

    q_half_range: float
    n_points: int

    def __post_init__(self):
        if not (self.q_half_range > 0 and math.isfinite(self.q_half_range)):
            raise UnderResolvedError(f"q_half_range must be > 0, got {self.q_half_range!r}")
        if int(self.n_points) != self.n_points or self.n_points < 3 or self.n_points % 2 == 0:
            raise UnderResolvedError(
                f"n_points must be an odd integer >= 3 for Simpson's rule, got {self.n_points!r}"
            )

    @classmethod
    def for_problem(cls, slit: DoubleSlit, spec: GaussianSpectrum, margin: float = 2.0):
        """Default grid: +/- 8 w support, step ``margin`` times finer than required."""
        half = SUPPORT_SIGMAS * spec.bandwidth_w
        n = int(math.ceil(2.0 * half * margin / max_step(slit, spec))) + 1
        if n % 2 == 0:
            n += 1
        return cls(half, n)

    @property
    def step(self) -> float:
        return 2.0 * self.q_half_range / (self.n_points - 1)

    def check(self, slit: DoubleSlit, spec: GaussianSpectrum) -> None:
        limit = max_step(slit, spec)
        if self.step > limit * (1 + 1e-12):
            raise UnderResolvedError(
                f"quadrature step {self.step:.6g} rad/m exceeds the resolution limit "
                f"{limit:.6g} rad/m (min(2*pi/d, w)/{STEPS_PER_SCALE}); "
                "increase n_points or shrink q_half_range"
            )

    def nodes(self) -> np.ndarray:
        return np.linspace(-self.q_half_range, self.q_half_range, self.n_points)

    def weights(self) -> np.ndarray:
        w = np.ones(self.n_points)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return w * (self.step / 3.0)

    def refined(self) -> "QuadratureConfig":
        """Same range with the step halved."""
        return QuadratureConfig(self.q_half_range, 2 * self.n_points - 1)


def _resolve(slit, spec, quad):
    if quad is None:
        return QuadratureConfig.for_problem(slit, spec)
    quad.check(slit, spec)
    return quad


def _cross_integral(setup, slit, spec, quad, x1, x2):
    """Simpson estimate of ``int T(kx1/z - q) T(kx2/z - q) S(q) dq`` for paired arrays."""
    q = quad.nodes()
    sw = quad.weights() * spectrum_value(spec, q)
    u1 = np.atleast_1d(reduced_frequency(setup, x1))
    u2 = np.atleast_1d(reduced_frequency(setup, x2))
    u1, u2 = np.broadcast_arrays(u1, u2)
    out = np.empty(u1.shape)
    flat1, flat2, flat_out = u1.ravel(), u2.ravel(), out.reshape(-1)
    rows = max(1, _CHUNK_ELEMENTS // q.size)
    for start in range(0, flat1.size, rows):
        sl = slice(start, start + rows)
        t1 = aperture_transfer(slit, flat1[sl, None] - q)
        if np.array_equal(flat1[sl], flat2[sl]):
            prod = t1 * t1
        else:
            prod = t1 * aperture_transfer(slit, flat2[sl, None] - q)
        flat_out[sl] = prod @ sw
    return out


def _scalar_or_array(value, *inputs):
    if all(np.ndim(v) == 0 for v in inputs):
        return float(np.asarray(value).reshape(-1)[0])
    return value


def g1_thermal(setup: OpticalSetup, slit: DoubleSlit, spec: GaussianSpectrum,
               quad: QuadratureConfig | None, x):
    """Mean intensity ``G1(x, x)`` of the chaotic source at detector position(s) ``x``."""
    quad = _resolve(slit, spec, quad)
    val = setup.amplitude_A * _cross_integral(setup, slit, spec, quad, x, x)
    return _scalar_or_array(val, x)


def gamma_cross(setup: OpticalSetup, slit: DoubleSlit, spec: GaussianSpectrum,
                quad: QuadratureConfig | None, x1, x2):
    """Cross-spectral integral entering the second term of G2 (no ``A`` factor)."""
    quad = _resolve(slit, spec, quad)
    return _scalar_or_array(_cross_integral(setup, slit, spec, quad, x1, x2), x1, x2)


def _thermal_terms(setup, slit, spec, quad, x1, x2):
    quad = _resolve(slit, spec, quad)
    j1 = _cross_integral(setup, slit, spec, quad, x1, x1)
    j2 = _cross_integral(setup, slit, spec, quad, x2, x2)
    gam = _cross_integral(setup, slit, spec, quad, x1, x2)
    return j1, j2, gam


def g2_thermal(setup: OpticalSetup, slit: DoubleSlit, spec: GaussianSpectrum,
               quad: QuadratureConfig | None, x1, x2):
    """Joint-intensity correlation ``G2(x1, x2)`` of the chaotic source."""
    j1, j2, gam = _thermal_terms(setup, slit, spec, quad, x1, x2)
    a2 = setup.amplitude_A ** 2
    return _scalar_or_array(a2 * (j1 * j2 + gam * gam), x1, x2)


def _check_marginals(slit, *marginals):
    floor = DEGENERATE_RTOL * aperture_transfer(slit, 0.0) ** 2
    for m in marginals:
        if np.any(~(np.asarray(m) > floor)):
            raise DegenerateDenominatorError(
                "mean intensity vanishes at a detector position; "
                "g2 is undefined outside the illuminated region"
            )


def g2_normalized(setup: OpticalSetup, slit: DoubleSlit, spec: GaussianSpectrum,
                  quad: QuadratureConfig | None, x1, x2):
    """Normalized ``g2 = G2 / (G1(x1) G1(x2))``; lies in [1, 2] for this source."""
    j1, j2, gam = _thermal_terms(setup, slit, spec, quad, x1, x2)
    _check_marginals(slit, j1, j2)
    # A cancels; written as 1 + |Gamma|^2/(J1 J2) so that x1 == x2 gives 2 exactly.
    return _scalar_or_array(1.0 + (gam * gam) / (j1 * j2), x1, x2)


def g1_coherent(setup: OpticalSetup, slit: DoubleSlit, x):
    """Coherent plane-wave illumination: ``A T(kx/z)^2``."""
    return setup.amplitude_A * np.square(aperture_transfer(slit, reduced_frequency(setup, x)))


def g2_coherent(setup: OpticalSetup, slit: DoubleSlit, x1, x2):
    return g1_coherent(setup, slit, x1) * g1_coherent(setup, slit, x2)


def g2_coherent_normalized(setup: OpticalSetup, slit: DoubleSlit, x1, x2):
    n1 = g1_coherent(setup, slit, x1)
    n2 = g1_coherent(setup, slit, x2)
    _check_marginals(slit, n1 / setup.amplitude_A, n2 / setup.amplitude_A)
    return g2_coherent(setup, slit, x1, x2) / (n1 * n2)


def broadband_g2(setup: OpticalSetup, slit: DoubleSlit, x1, x2):
    """Wide-bandwidth limit of G2, up to a constant factor.

    Returns ``A^2 [T(0)^2 + T(k (x1 - x2) / z)^2]``. The overall prefactor of
    the limit is ambiguous, so use this only through ratios (max/min = 2).
    """
    t0 = aperture_transfer(slit, 0.0)
    dt = aperture_transfer(slit, reduced_frequency(setup, np.subtract(x1, x2)))
    return setup.amplitude_A ** 2 * (t0 * t0 + np.square(dt))


def broadband_g2_normalized(setup: OpticalSetup, slit: DoubleSlit, x1, x2):
    t0 = aperture_transfer(slit, 0.0)
    return broadband_g2(setup, slit, x1, x2) / (setup.amplitude_A ** 2 * t0 * t0)


def scan(setup: OpticalSetup, slit: DoubleSlit, spec: GaussianSpectrum | None,
         quad: QuadratureConfig | None, grid: ScanGrid, kind: str, scan_mode: str,
         source: str = "thermal") -> CorrelationCurve:
    """Evaluate one detector scan.

    ``scan_mode`` picks the detector pairs: ``intensity`` gives G1(x, x),
    ``antisymmetric`` (x, -x), ``symmetric`` (x, x) and ``fixed_zero`` (x, 0).
    ``spec`` and ``quad`` are ignored for the coherent source.
    """
    check_request(kind, scan_mode, source)
    x1, x2 = detector_pairs(grid, scan_mode)
    if source == "coherent":
        if kind == "G1":
            values = g1_coherent(setup, slit, x1)
        elif kind == "G2":
            values = g2_coherent(setup, slit, x1, x2)
        else:
            values = g2_coherent_normalized(setup, slit, x1, x2)
    else:
        if spec is None:
            raise ValueError("thermal scans need a GaussianSpectrum")
        if kind == "G1":
            values = g1_thermal(setup, slit, spec, quad, x1)
        elif kind == "G2":
            values = g2_thermal(setup, slit, spec, quad, x1, x2)
        else:
            values = g2_normalized(setup, slit, spec, quad, x1, x2)
    return CorrelationCurve(grid, np.asarray(values, dtype=float), kind, scan_mode)
