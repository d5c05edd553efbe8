"""Monte-Carlo speckle ensembles for the double-slit correlations.

Each realization draws the source's plane-wave amplitudes E(q_j) as
independent circular complex Gaussians with variance S(q_j) dq, propagates
them through the double slit to the detection plane,

    U(x) = sum_j T(kx/z - q_j) E(q_j),    I(x) = |U(x)|^2,

and accumulates intensities and intensity products. Nothing here uses the
Gaussian moment theorem, so the ensemble averages are an independent check
on :mod:`slitcorr.quadrature`.

Reproducibility: realizations are generated in fixed-size chunks, chunk ``c``
drawing from ``SeedSequence(seed, spawn_key=(c,))``. Partial sums are merged
in chunk order, so results are bit-identical for any number of workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import quadrature
from .curves import CorrelationCurve, EstimateCurve, check_request, detector_pairs
from .errors import (
    DegenerateDenominatorError,
    GridMismatchError,
    InsufficientRealizationsError,
    NonFiniteError,
)
from .model import (
    DoubleSlit,
    GaussianSpectrum,
    OpticalSetup,
    ScanGrid,
    aperture_transfer,
    reduced_frequency,
    spectrum_value,
)

DEFAULT_MODES = 257


@dataclass(frozen=True)
class SpeckleField:
    """One realization of the source: complex amplitudes on a uniform q grid."""

    q_grid: np.ndarray
    amplitudes: np.ndarray

    def __post_init__(self):
        if np.shape(self.q_grid) != np.shape(self.amplitudes):
            raise ValueError("amplitudes length must equal q_grid length")

    def __mul__(self, factor):
        return SpeckleField(self.q_grid, self.amplitudes * factor)

    __rmul__ = __mul__


@dataclass(frozen=True)
class MonteCarloConfig:
    """Ensemble size, seed and mode grid.

    ``q_half_range=None`` means 8 rms bandwidths. ``n_modes`` is a lower
    bound: the mode grid is refined further when needed to meet the same
    step limit the quadrature uses (this only matters for wide spectra).
    """

    n_realizations: int = 100_000
    seed: int = 20040901
    q_half_range: Optional[float] = None
    n_modes: int = DEFAULT_MODES
    n_batches: int = 32
    chunk_size: int = 1000
    stderr_method: str = "batch"

    def __post_init__(self):
        if self.n_realizations < 1:
            raise InsufficientRealizationsError("n_realizations must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        if self.n_modes < 2:
            raise ValueError("n_modes must be >= 2")
        if self.n_batches < 2:
            raise ValueError("n_batches must be >= 2")
        if self.chunk_size < 1:
            raise ValueError("chunk_size must be >= 1")
        if self.stderr_method not in ("batch", "jackknife"):
            raise ValueError("stderr_method must be 'batch' or 'jackknife'")

    def mode_grid(self, slit: DoubleSlit, spec: GaussianSpectrum) -> np.ndarray:
        half = self.q_half_range
        if half is None:
            half = quadrature.SUPPORT_SIGMAS * spec.bandwidth_w
        needed = int(math.ceil(2.0 * half / quadrature.max_step(slit, spec))) + 1
        return np.linspace(-half, half, max(self.n_modes, needed))


def _mode_sigma(spec, q_grid):
    dq = q_grid[1] - q_grid[0]
    return np.sqrt(spectrum_value(spec, q_grid) * dq / 2.0)


def _draw(rng, sigma, n):
    z = rng.standard_normal((n, 2, sigma.size))
    return (z[:, 0] + 1j * z[:, 1]) * sigma


def sample_field(spec: GaussianSpectrum, q_grid, rng) -> SpeckleField:
    """Draw one chaotic field realization on ``q_grid``.

    ``rng`` is a :class:`numpy.random.Generator` (or a seed for one). Real and
    imaginary parts of each mode are independent normals of variance
    ``S(q_j) dq / 2``.
    """
    q_grid = np.asarray(q_grid, dtype=float)
    rng = np.random.default_rng(rng)
    return SpeckleField(q_grid, _draw(rng, _mode_sigma(spec, q_grid), 1)[0])


def transfer_matrix(setup: OpticalSetup, slit: DoubleSlit, q_grid, x) -> np.ndarray:
    """Matrix ``K[i, j] = T(k x_i / z - q_j)`` mapping mode amplitudes to the plane."""
    u = np.atleast_1d(reduced_frequency(setup, x))
    return aperture_transfer(slit, u[:, None] - np.asarray(q_grid)[None, :])


def propagate_to_plane(field: SpeckleField, slit: DoubleSlit, setup: OpticalSetup, x):
    """Complex amplitude ``U(x)`` in the detection plane; ``|U|^2`` is the intensity."""
    u = transfer_matrix(setup, slit, field.q_grid, x) @ field.amplitudes
    return u if np.ndim(x) else complex(u[0])


@dataclass(frozen=True)
class ScanRequest:
    """Everything needed to evaluate one detector scan by either route."""

    setup: OpticalSetup
    slit: DoubleSlit
    spec: Optional[GaussianSpectrum]
    grid: ScanGrid
    kind: str = "g2"
    scan_mode: str = "antisymmetric"
    source: str = "thermal"

    def __post_init__(self):
        check_request(self.kind, self.scan_mode, self.source)
        if self.source == "thermal" and self.spec is None:
            raise ValueError("thermal requests need a GaussianSpectrum")

    def quadrature(self, quad=None) -> CorrelationCurve:
        return quadrature.scan(self.setup, self.slit, self.spec, quad, self.grid,
                               self.kind, self.scan_mode, self.source)


def _batch_edges(n, n_batches):
    """Start index of each contiguous batch of realizations."""
    return (np.arange(n_batches + 1) * n) // n_batches


class _Accumulator:
    """Per-chunk worker: draws realizations and returns per-batch partial sums."""

    def __init__(self, request, config, n_batches):
        self.config = config
        self.q = config.mode_grid(request.slit, request.spec)
        self.sigma = _mode_sigma(request.spec, self.q)
        x1, x2 = detector_pairs(request.grid, request.scan_mode)
        self.k1 = transfer_matrix(request.setup, request.slit, self.q, x1).T.astype(complex)
        self.same = np.array_equal(x1, x2)
        self.k2 = self.k1 if self.same else (
            transfer_matrix(request.setup, request.slit, self.q, x2).T.astype(complex))
        self.edges = _batch_edges(config.n_realizations, n_batches)

    def __call__(self, chunk):
        cfg = self.config
        lo = chunk * cfg.chunk_size
        hi = min(lo + cfg.chunk_size, cfg.n_realizations)
        rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(chunk,)))
        e = _draw(rng, self.sigma, hi - lo)
        u1 = e @ self.k1
        i1 = u1.real ** 2 + u1.imag ** 2
        if self.same:
            i2 = i1
        else:
            u2 = e @ self.k2
            i2 = u2.real ** 2 + u2.imag ** 2
        # batches overlapping [lo, hi); split rows at batch boundaries
        first = int(np.searchsorted(self.edges, lo, side="right")) - 1
        last = int(np.searchsorted(self.edges, hi - 1, side="right")) - 1
        cuts = np.clip(self.edges[first:last + 1], lo, hi) - lo
        s1 = np.add.reduceat(i1, cuts, axis=0)
        s2 = s1 if self.same else np.add.reduceat(i2, cuts, axis=0)
        sp = np.add.reduceat(i1 * i2, cuts, axis=0)
        return first, s1, s2, sp


def _ensemble_sums(request, config, workers):
    n = config.n_realizations
    n_batches = min(config.n_batches, n)
    acc = _Accumulator(request, config, n_batches)
    nx = len(request.grid)
    sums = np.zeros((3, n_batches, nx))
    chunks = range(math.ceil(n / config.chunk_size))
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(acc, chunks))
    else:
        parts = [acc(c) for c in chunks]
    for first, s1, s2, sp in parts:
        rows = slice(first, first + s1.shape[0])
        sums[0, rows] += s1
        sums[1, rows] += s2
        sums[2, rows] += sp
    if not np.all(np.isfinite(sums)):
        raise NonFiniteError("non-finite value in the ensemble accumulation")
    counts = np.diff(_batch_edges(n, n_batches)).astype(float)
    return sums, counts


def _statistic(kind, amplitude, s1, s2, sp, count):
    """Apply the requested estimator to (possibly batched) sums."""
    m1, m2, mp = s1 / count, s2 / count, sp / count
    if kind == "G1":
        return amplitude * m1
    if kind == "G2":
        return amplitude ** 2 * mp
    with np.errstate(divide="ignore", invalid="ignore"):
        return mp / (m1 * m2)


def _coherent_estimate(request, config):
    x1, x2 = detector_pairs(request.grid, request.scan_mode)
    i1 = np.square(aperture_transfer(request.slit, reduced_frequency(request.setup, x1)))
    i2 = np.square(aperture_transfer(request.slit, reduced_frequency(request.setup, x2)))
    a = request.setup.amplitude_A
    if request.kind == "G1":
        values = a * i1
    elif request.kind == "G2":
        values = a * a * i1 * i2
    else:
        if np.any(i1 * i2 <= 0):
            raise DegenerateDenominatorError("coherent intensity vanishes at a detector position")
        values = (i1 * i2) / (i1 * i2)
    return EstimateCurve(request.grid, values, request.kind, request.scan_mode,
                         stderr=np.zeros_like(values),
                         n_realizations=config.n_realizations, seed=config.seed)


def estimate(request: ScanRequest, config: MonteCarloConfig, workers: int = 1) -> EstimateCurve:
    """Ensemble estimate of a scan with per-point standard errors.

    The point estimate uses all realizations (for ``g2`` the plug-in ratio
    <I1 I2>/(<I1><I2>)). Standard errors come from ``config.n_batches``
    contiguous batch means, or a delete-one-batch jackknife when
    ``config.stderr_method == "jackknife"``. A coherent source is
    deterministic: its estimate is exact and every stderr is zero.
    """
    if config.n_realizations < 2:
        raise InsufficientRealizationsError(
            "at least 2 realizations are needed to estimate a standard error"
        )
    if request.source == "coherent":
        return _coherent_estimate(request, config)

    sums, counts = _ensemble_sums(request, config, workers)
    a = request.setup.amplitude_A
    total = sums.sum(axis=1)
    n = float(config.n_realizations)
    values = _statistic(request.kind, a, total[0], total[1], total[2], n)
    n_b = counts.size
    if config.stderr_method == "batch":
        per_batch = _statistic(request.kind, a, sums[0], sums[1], sums[2], counts[:, None])
        stderr = per_batch.std(axis=0, ddof=1) / math.sqrt(n_b)
    else:
        loo = _statistic(request.kind, a, total[0] - sums[0], total[1] - sums[1],
                         total[2] - sums[2], (n - counts)[:, None])
        stderr = np.sqrt((n_b - 1) / n_b * np.sum((loo - loo.mean(axis=0)) ** 2, axis=0))
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(stderr))):
        raise DegenerateDenominatorError(
            "ensemble mean intensity vanished at a detector position"
        )
    return EstimateCurve(request.grid, values, request.kind, request.scan_mode,
                         stderr=stderr, n_realizations=config.n_realizations,
                         seed=config.seed)


@dataclass(frozen=True)
class ComparisonReport:
    z: np.ndarray
    max_abs_z: float
    fraction_within: float
    threshold_sigma: float = 3.0

    @property
    def n_points(self) -> int:
        return int(self.z.size)

    def passed(self, min_fraction: float = 0.99) -> bool:
        return self.fraction_within >= min_fraction

    def summary(self) -> str:
        return (
            f"points={self.n_points} max|z|={self.max_abs_z:.3f} "
            f"within {self.threshold_sigma:g} sigma: {100 * self.fraction_within:.2f}%"
        )


def compare_with_quadrature(estimate: CorrelationCurve, reference: CorrelationCurve,
                            threshold_sigma: float = 3.0) -> ComparisonReport:
    """Per-point z-scores ``(estimate - reference) / stderr``.

    Points with zero stderr score 0 when the values agree exactly and
    infinity otherwise.
    """
    if estimate.grid != reference.grid:
        raise GridMismatchError("estimate and reference are sampled on different grids")
    if estimate.scan_mode != reference.scan_mode or estimate.kind != reference.kind:
        raise GridMismatchError(
            f"cannot compare {estimate.kind}/{estimate.scan_mode} "
            f"with {reference.kind}/{reference.scan_mode}"
        )
    if estimate.stderr is None:
        raise ValueError("estimate has no standard errors")
    diff = estimate.values - reference.values
    se = estimate.stderr
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(se > 0, diff / np.where(se > 0, se, 1.0),
                     np.where(diff == 0, 0.0, np.inf * np.sign(diff)))
    abs_z = np.abs(z)
    return ComparisonReport(
        z=z,
        max_abs_z=float(abs_z.max()),
        fraction_within=float(np.mean(abs_z <= threshold_sigma)),
        threshold_sigma=threshold_sigma,
    )
