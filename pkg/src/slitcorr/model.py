"""Optical geometry, source spectrum and the double-slit transfer function.

All lengths are SI meters and all spatial frequencies rad/m. Every type is a
frozen dataclass and every function is pure, so the objects can be shared
freely between threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

# Default experimental geometry (He-Ne laser, 55 um slits at 100 um pitch).
WAVELENGTH = 632.8e-9
DISTANCE_Z = 0.550
SLIT_WIDTH = 55e-6
SLIT_SEPARATION = 100e-6
NORMALIZED_BANDWIDTH = 0.52

_SINC_SERIES_CUTOFF = 1e-4


@dataclass(frozen=True)
class DoubleSlit:
    """Two identical slits of width ``slit_width_b`` whose centers are
    ``slit_separation_d`` apart (center-to-center, not edge gap)."""

    slit_width_b: float = SLIT_WIDTH
    slit_separation_d: float = SLIT_SEPARATION

    def __post_init__(self):
        if not self.slit_width_b > 0:
            raise ConfigError(
                f"slit_width must be > 0, got {self.slit_width_b!r}", key="slit_width"
            )
        if not self.slit_separation_d >= self.slit_width_b:
            raise ConfigError(
                "slit_separation must be >= slit_width (slits may not overlap), "
                f"got d={self.slit_separation_d!r}, b={self.slit_width_b!r}",
                key="slit_separation",
            )


@dataclass(frozen=True)
class GaussianSpectrum:
    """Gaussian spatial-frequency spectrum of unit area and rms width ``bandwidth_w``."""

    bandwidth_w: float

    def __post_init__(self):
        if not (self.bandwidth_w > 0 and math.isfinite(self.bandwidth_w)):
            raise ConfigError(
                f"bandwidth must be > 0, got {self.bandwidth_w!r}", key="normalized_bandwidth"
            )

    @classmethod
    def from_normalized(cls, normalized: float, slit: DoubleSlit) -> "GaussianSpectrum":
        """Build from the dimensionless bandwidth ``w*b/(2*pi)``."""
        if not normalized > 0:
            raise ConfigError(
                f"bandwidth must be > 0, got {normalized!r}", key="normalized_bandwidth"
            )
        return cls(2.0 * math.pi * normalized / slit.slit_width_b)

    def normalized(self, slit: DoubleSlit) -> float:
        return self.bandwidth_w * slit.slit_width_b / (2.0 * math.pi)


@dataclass(frozen=True)
class OpticalSetup:
    wavelength: float = WAVELENGTH
    distance_z: float = DISTANCE_Z
    amplitude_A: float = 1.0

    def __post_init__(self):
        for name, key in (
            ("wavelength", "wavelength"),
            ("distance_z", "distance_z"),
            ("amplitude_A", "amplitude"),
        ):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ConfigError(f"{key} must be > 0, got {value!r}", key=key)

    @property
    def wavenumber(self) -> float:
        return 2.0 * math.pi / self.wavelength


@dataclass(frozen=True)
class ScanGrid:
    """Ordered detector coordinates along the scan axis."""

    positions: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.positions, dtype=float)
        if x.ndim != 1 or x.size < 2:
            raise ConfigError("scan grid needs at least 2 points", key="x_points")
        if not np.all(np.isfinite(x)):
            raise ConfigError("scan grid positions must be finite", key="x_range")
        if not np.all(np.diff(x) > 0):
            raise ConfigError("scan grid must be strictly increasing", key="x_range")
        x.setflags(write=False)
        object.__setattr__(self, "positions", x)

    @classmethod
    def symmetric(cls, half_range: float = 5.5e-3, n_points: int = 221) -> "ScanGrid":
        """Uniform grid on ``[-half_range, half_range]``; odd ``n_points`` puts a node at 0."""
        if not half_range > 0:
            raise ConfigError(f"x_range must be > 0, got {half_range!r}", key="x_range")
        return cls(np.linspace(-half_range, half_range, int(n_points)))

    def __len__(self):
        return self.positions.size

    def __eq__(self, other):
        if not isinstance(other, ScanGrid):
            return NotImplemented
        return self.positions.shape == other.positions.shape and bool(
            np.array_equal(self.positions, other.positions)
        )

    def __hash__(self):
        return hash(self.positions.tobytes())

    @property
    def is_uniform(self) -> bool:
        step = np.diff(self.positions)
        return bool(np.allclose(step, step[0], rtol=1e-9, atol=0.0))

    @property
    def step(self) -> float:
        return float(self.positions[1] - self.positions[0])


def sinc(u):
    """Unnormalized sinc ``sin(u)/u`` with a series branch near zero."""
    u = np.asarray(u, dtype=float)
    small = np.abs(u) < _SINC_SERIES_CUTOFF
    safe = np.where(small, 1.0, u)
    u2 = u * u
    return np.where(small, 1.0 - u2 / 6.0 + u2 * u2 / 120.0, np.sin(safe) / safe)


def aperture_transfer(slit: DoubleSlit, q):
    """Fourier transform of the double-slit transmission at spatial frequency ``q``.

    Returns ``(2b/sqrt(2 pi)) * sinc(q b / 2) * cos(q d / 2)``. Real and even in
    ``q``; accepts scalars or arrays.
    """
    b = slit.slit_width_b
    q = np.asarray(q, dtype=float)
    out = (2.0 * b / math.sqrt(2.0 * math.pi)) * sinc(0.5 * b * q) * np.cos(
        0.5 * slit.slit_separation_d * q
    )
    return out if out.ndim else float(out)


def spectrum_value(spec: GaussianSpectrum, q):
    w = spec.bandwidth_w
    q = np.asarray(q, dtype=float)
    out = np.exp(-0.5 * (q / w) ** 2) / (math.sqrt(2.0 * math.pi) * w)
    return out if out.ndim else float(out)


def reduced_frequency(setup: OpticalSetup, x):
    """Map a detector coordinate to its transverse spatial frequency ``k x / z``."""
    out = np.asarray(x, dtype=float) * (setup.wavenumber / setup.distance_z)
    return out if out.ndim else float(out)


def coherent_fringe_period(setup: OpticalSetup, slit: DoubleSlit) -> float:
    """One-photon fringe spacing ``lambda z / d`` of the coherent pattern."""
    return setup.wavelength * setup.distance_z / slit.slit_separation_d


def envelope_half_width(setup: OpticalSetup, slit: DoubleSlit) -> float:
    """Position of the first zero of the single-slit envelope, ``lambda z / b``."""
    return setup.wavelength * setup.distance_z / slit.slit_width_b
