"""Imperfect detection and fringe visibility.

The measured normalized correlation is modelled as an affine distortion of
the ideal one with an offset ``delta`` and an efficiency ``eta``. Two readings
of that model are supported:

``fluctuation_scaled`` (default)
    g -> 1 + delta + eta**2 * (g - 1); only the excess over the uncorrelated
    baseline is scaled, so delta = 0, eta = 1 leaves every curve untouched.
``literal``
    g -> 1 + delta + eta**2 * g.

Finite detector size is modelled separately as a top-hat moving average along
the scan axis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import CorrelationCurve
from .errors import ConfigError, NoFringeError

INTERPRETATIONS = ("fluctuation_scaled", "literal")

DELTA = 0.04
ETA = 0.66
# Side of a square detector with the quoted 0.28 mm^2 active area.
DETECTOR_WIDTH = math.sqrt(0.28e-6)


@dataclass(frozen=True)
class DetectionModel:
    delta: float = DELTA
    eta: float = ETA
    detector_width: float = DETECTOR_WIDTH
    interpretation: str = "fluctuation_scaled"

    def __post_init__(self):
        if not 0 < self.eta <= 1:
            raise ConfigError(f"eta must be in (0, 1], got {self.eta!r}", key="eta")
        if not self.delta >= 0:
            raise ConfigError(f"delta must be >= 0, got {self.delta!r}", key="delta")
        if not self.detector_width >= 0:
            raise ConfigError(
                f"detector_width must be >= 0, got {self.detector_width!r}", key="detector_width"
            )
        if self.interpretation not in INTERPRETATIONS:
            raise ConfigError(
                f"interpretation must be one of {INTERPRETATIONS}, got {self.interpretation!r}",
                key="interpretation",
            )

    def transform(self, g):
        """Apply the distortion to raw normalized-correlation values."""
        g = np.asarray(g, dtype=float)
        e2 = self.eta ** 2
        if self.interpretation == "literal":
            return 1.0 + self.delta + e2 * g
        return 1.0 + self.delta + e2 * (g - 1.0)

    def slope(self) -> float:
        return self.eta ** 2


def apply_detection_model(curve: CorrelationCurve, model: DetectionModel) -> CorrelationCurve:
    if curve.kind != "g2":
        raise ValueError(f"detection model applies to normalized g2 curves, got {curve.kind!r}")
    stderr = None if curve.stderr is None else curve.stderr * model.slope()
    return curve.with_values(model.transform(curve.values), stderr=stderr)


def joint_intensity(g2_curve: CorrelationCurve, mean_product) -> CorrelationCurve:
    """Undo the normalization: G2 = g2 * <I1><I2>.

    Applied to a detection-modified g2 this gives the modified joint-intensity
    curve, which is what an unnormalized measurement records.
    """
    if g2_curve.kind != "g2":
        raise ValueError("joint_intensity expects a g2 curve")
    mean_product = np.asarray(mean_product, dtype=float)
    stderr = None if g2_curve.stderr is None else g2_curve.stderr * mean_product
    return g2_curve.with_values(g2_curve.values * mean_product, stderr=stderr, kind="G2")


def _cumulative(x, y):
    return np.concatenate(([0.0], np.cumsum(np.diff(x) * (y[:-1] + y[1:]) / 2.0)))


def _integral_to(x, y, cum, t):
    """Integral of the linear interpolant of (x, y) from x[0] to each t."""
    i = np.clip(np.searchsorted(x, t, side="right") - 1, 0, x.size - 2)
    h = x[i + 1] - x[i]
    s = t - x[i]
    return cum[i] + y[i] * s + (y[i + 1] - y[i]) * s * s / (2.0 * h)


def finite_detector_average(curve: CorrelationCurve, detector_width: float) -> CorrelationCurve:
    """Average over a top-hat detector of the given width along the scan axis.

    The curve is treated as piecewise linear between samples and averaged
    exactly over ``[x - width/2, x + width/2]``. Near the grid ends the
    window is clipped to the sampled range.
    """
    if detector_width < 0:
        raise ValueError("detector_width must be >= 0")
    if detector_width == 0:
        return curve
    x = curve.x
    span = x[-1] - x[0]
    if detector_width > span:
        raise ValueError(
            f"detector width {detector_width:.6g} m exceeds the grid span {span:.6g} m"
        )
    if not curve.grid.is_uniform:
        raise ValueError("finite_detector_average needs a uniform grid")

    def smooth(y):
        cum = _cumulative(x, y)
        lo = np.maximum(x - detector_width / 2, x[0])
        hi = np.minimum(x + detector_width / 2, x[-1])
        return (_integral_to(x, y, cum, hi) - _integral_to(x, y, cum, lo)) / (hi - lo)

    # neighbouring errors are correlated; averaging them is an upper bound
    stderr = None if curve.stderr is None else smooth(curve.stderr)
    return curve.with_values(np.maximum(smooth(curve.values), 0.0), stderr=stderr)


@dataclass(frozen=True)
class VisibilityResult:
    v: float
    x_max: float
    x_min: float
    window: tuple
    max_value: float = float("nan")
    min_value: float = float("nan")


def central_fringe_window(curve: CorrelationCurve) -> tuple:
    """Index range spanning the central fringe and its two nearest minima.

    Starts at the node closest to x = 0, climbs to the local maximum and
    walks outward until the curve turns upward on each side.
    """
    y = curve.values
    i = curve.center_index()
    while True:
        if i > 0 and y[i - 1] > y[i]:
            i -= 1
        elif i < y.size - 1 and y[i + 1] > y[i]:
            i += 1
        else:
            break
    left = i
    while left > 0 and y[left - 1] < y[left]:
        left -= 1
    right = i
    while right < y.size - 1 and y[right + 1] < y[right]:
        right += 1
    if left in (0, i) or right in (y.size - 1, i):
        raise NoFringeError("no fringe found around the centre of the scan")
    return left, i, right


def visibility(curve: CorrelationCurve, window=None) -> VisibilityResult:
    """Fringe visibility ``(max - min) / (max + min)``.

    With ``window=None`` the central fringe is analysed (see
    :func:`central_fringe_window`). An explicit ``(x_lo, x_hi)`` window uses
    all samples inside it and must contain at least one interior extremum.
    """
    x, y = curve.x, curve.values
    if window is None:
        left, _, right = central_fringe_window(curve)
        sel = np.arange(left, right + 1)
    else:
        lo, hi = window
        sel = np.flatnonzero((x >= lo) & (x <= hi))
        if sel.size == 0:
            raise NoFringeError(f"empty window [{lo:.6g}, {hi:.6g}]")
        dy = np.sign(np.diff(y[sel]))
        dy = dy[dy != 0]
        if dy.size < 2 or np.all(dy == dy[0]):
            raise NoFringeError("no fringe found: the curve has no extremum in the window")
    ys = y[sel]
    i_max = sel[np.argmax(ys)]
    i_min = sel[np.argmin(ys)]
    top, bottom = float(y[i_max]), float(y[i_min])
    if top + bottom == 0:
        raise NoFringeError("no fringe found: the curve vanishes in the window")
    return VisibilityResult(
        v=(top - bottom) / (top + bottom),
        x_max=float(x[i_max]),
        x_min=float(x[i_min]),
        window=(float(x[sel[0]]), float(x[sel[-1]])),
        max_value=top,
        min_value=bottom,
    )
