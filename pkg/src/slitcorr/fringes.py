"""Peak finding, fringe counting and fringe-period measurement on sampled curves.

A peak is a grid point strictly greater than both neighbours; no smoothing
is applied. "Principal" fringes are the peaks whose topographic prominence
is at least a fraction of the largest prominence on the curve, which drops
the faint side-lobe ripples a plot would not show as fringes.
"""
from __future__ import annotations

import numpy as np
from scipy.signal import peak_prominences

from .curves import CorrelationCurve

PRINCIPAL_PROMINENCE = 0.05


def local_maxima(values) -> np.ndarray:
    y = np.asarray(values, dtype=float)
    return np.flatnonzero((y[1:-1] > y[:-2]) & (y[1:-1] > y[2:])) + 1


def local_minima(values) -> np.ndarray:
    return local_maxima(-np.asarray(values, dtype=float))


def refine_extremum(x, y, i: int) -> float:
    """Vertex of the parabola through the three samples around index ``i``."""
    x0, x1, x2 = x[i - 1], x[i], x[i + 1]
    y0, y1, y2 = y[i - 1], y[i], y[i + 1]
    denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
    a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
    b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom
    if a == 0:
        return float(x1)
    return float(-b / (2 * a))


def principal_peaks(curve: CorrelationCurve, rel_prominence: float = PRINCIPAL_PROMINENCE,
                    within=None) -> np.ndarray:
    """Indices of principal peaks, optionally restricted to ``|x| < within``."""
    y = curve.values
    peaks = local_maxima(y)
    if peaks.size == 0:
        return peaks
    prom = peak_prominences(y, peaks)[0]
    keep = prom >= rel_prominence * prom.max()
    if within is not None:
        keep &= np.abs(curve.x[peaks]) < within
    return peaks[keep]


def count_fringes(curve: CorrelationCurve, rel_prominence: float = PRINCIPAL_PROMINENCE,
                  within=None) -> int:
    return int(principal_peaks(curve, rel_prominence, within).size)


def peak_positions(curve: CorrelationCurve, rel_prominence: float = PRINCIPAL_PROMINENCE,
                   within=None) -> np.ndarray:
    """Sub-grid positions of the principal peaks."""
    idx = principal_peaks(curve, rel_prominence, within)
    return np.array([refine_extremum(curve.x, curve.values, i) for i in idx])


def fringe_period(curve: CorrelationCurve, rel_prominence: float = PRINCIPAL_PROMINENCE,
                  within=None) -> float:
    """Mean spacing of adjacent principal peaks (needs at least two)."""
    pos = peak_positions(curve, rel_prominence, within)
    if pos.size < 2:
        raise ValueError("fewer than two principal peaks; fringe period undefined")
    return float((pos[-1] - pos[0]) / (pos.size - 1))
