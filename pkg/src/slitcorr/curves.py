"""Sampled correlation curves shared by the quadrature, speckle and detection code."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .model import ScanGrid

KINDS = ("G1", "G2", "g2")
SCAN_MODES = ("intensity", "antisymmetric", "symmetric", "fixed_zero")
SOURCES = ("thermal", "coherent")


def check_request(kind: str, scan_mode: str, source: str = "thermal") -> None:
    if kind not in KINDS:
        raise ValueError(f"kind must be one of {KINDS}, got {kind!r}")
    if scan_mode not in SCAN_MODES:
        raise ValueError(f"scan_mode must be one of {SCAN_MODES}, got {scan_mode!r}")
    if source not in SOURCES:
        raise ValueError(f"source must be one of {SOURCES}, got {source!r}")
    if (kind == "G1") != (scan_mode == "intensity"):
        raise ValueError(
            f"kind {kind!r} is incompatible with scan_mode {scan_mode!r}: "
            "G1 goes with the intensity scan and G2/g2 with the two-detector scans"
        )


def detector_pairs(grid: ScanGrid, scan_mode: str):
    """Return the ``(x1, x2)`` detector coordinates visited by a scan."""
    x = grid.positions
    if scan_mode in ("intensity", "symmetric"):
        return x, x
    if scan_mode == "antisymmetric":
        return x, -x
    if scan_mode == "fixed_zero":
        return x, np.zeros_like(x)
    raise ValueError(f"unknown scan_mode {scan_mode!r}")


@dataclass(frozen=True)
class CorrelationCurve:
    """Correlation values sampled on a scan grid.

    ``kind`` is ``"G1"``, ``"G2"`` or ``"g2"``; ``scan_mode`` records how the
    two detectors moved. ``stderr`` is only set for Monte-Carlo estimates.
    """

    grid: ScanGrid
    values: np.ndarray
    kind: str
    scan_mode: str
    stderr: Optional[np.ndarray] = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != self.grid.positions.shape:
            raise ValueError(
                f"values length {values.size} does not match grid length {len(self.grid)}"
            )
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.scan_mode not in SCAN_MODES:
            raise ValueError(f"scan_mode must be one of {SCAN_MODES}, got {self.scan_mode!r}")
        if np.any(values < 0):
            raise ValueError(f"{self.kind} values must be non-negative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.stderr is not None:
            stderr = np.array(self.stderr, dtype=float)
            if stderr.shape != values.shape:
                raise ValueError("stderr length does not match values length")
            if np.any(stderr < 0):
                raise ValueError("stderr must be non-negative")
            stderr.setflags(write=False)
            object.__setattr__(self, "stderr", stderr)

    @property
    def x(self) -> np.ndarray:
        return self.grid.positions

    def center_index(self) -> int:
        return int(np.argmin(np.abs(self.grid.positions)))

    def with_values(self, values, stderr=None, kind=None):
        return replace(
            self,
            values=values,
            stderr=stderr,
            kind=self.kind if kind is None else kind,
        )

    def normalized_to_center(self) -> "CorrelationCurve":
        """Divide by the value at the grid node closest to ``x = 0``."""
        ref = self.values[self.center_index()]
        if ref == 0:
            return self
        stderr = None if self.stderr is None else self.stderr / ref
        return replace(self, values=self.values / ref, stderr=stderr)


@dataclass(frozen=True)
class EstimateCurve(CorrelationCurve):
    """Monte-Carlo estimate; ``stderr`` is mandatory."""

    n_realizations: int = 0
    seed: Optional[int] = None

    def __post_init__(self):
        if self.stderr is None:
            raise ValueError("EstimateCurve requires stderr")
        super().__post_init__()
