"""Flat ``key = value`` experiment configuration.

Every key is optional; omitted keys take the values of the reference
experiment. Lengths accept the suffixes ``nm``, ``um`` (or ``µm``), ``mm``
and ``m``; a bare number is in meters. ``#`` starts a comment.

Keys
----
Geometry and source:
    slit_width, slit_separation, wavelength, distance_z, amplitude,
    normalized_bandwidth (w*b/(2*pi)), source (thermal | coherent)
Scan:
    kind (G1 | G2 | g2), scan_mode (intensity | antisymmetric | symmetric |
    fixed_zero), x_range (half-width of the symmetric grid), x_points
Detection:
    detection (apply delta/eta to normalized curves), delta, eta,
    interpretation (fluctuation_scaled | literal), detector_width,
    detector_averaging (apply the top-hat average)
Monte Carlo (any of these enables the section):
    mc_realizations, mc_seed, mc_modes, mc_batches, mc_chunk_size,
    mc_stderr (batch | jackknife)
Quadrature overrides:
    quad_half_range (rad/m), quad_points
"""
from __future__ import annotations

import math
import re
from decimal import Decimal, InvalidOperation
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional

from . import model
from .curves import KINDS, SCAN_MODES, SOURCES, check_request
from .detection import DELTA, DETECTOR_WIDTH, ETA, INTERPRETATIONS, DetectionModel
from .errors import ConfigError, UnderResolvedError
from .quadrature import QuadratureConfig
from .speckle import MonteCarloConfig, ScanRequest

# decimal exponents, applied to the literal so "55um" and "5.5e-5" round identically
_LENGTH_UNITS = {"nm": -9, "um": -6, "µm": -6, "μm": -6, "mm": -3, "m": 0}
_LENGTH_RE = re.compile(r"^\s*([-+0-9.eE]+)\s*(nm|um|µm|μm|mm|m)?\s*$")

LENGTH_KEYS = ("slit_width", "slit_separation", "wavelength", "distance_z",
               "x_range", "detector_width")
FLOAT_KEYS = ("amplitude", "normalized_bandwidth", "delta", "eta", "quad_half_range")
INT_KEYS = ("x_points", "mc_realizations", "mc_seed", "mc_modes", "mc_batches",
            "mc_chunk_size", "quad_points")
BOOL_KEYS = ("detection", "detector_averaging")
CHOICE_KEYS = {
    "source": SOURCES,
    "kind": KINDS,
    "scan_mode": SCAN_MODES,
    "interpretation": INTERPRETATIONS,
    "mc_stderr": ("batch", "jackknife"),
}
MC_KEYS = ("mc_realizations", "mc_seed", "mc_modes", "mc_batches", "mc_chunk_size", "mc_stderr")


def parse_length(text: str, key: str = "length") -> float:
    m = _LENGTH_RE.match(text)
    if not m:
        raise ConfigError(f"{key}: cannot parse length {text!r}", key=key)
    try:
        value = Decimal(m.group(1)).scaleb(_LENGTH_UNITS[m.group(2) or "m"])
    except InvalidOperation:
        raise ConfigError(f"{key}: cannot parse length {text!r}", key=key) from None
    return float(value)


def _parse_bool(text, key):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected true/false, got {text!r}", key=key)


def _parse_value(key, text):
    if key in LENGTH_KEYS:
        return parse_length(text, key)
    if key in FLOAT_KEYS:
        try:
            return float(text)
        except ValueError:
            raise ConfigError(f"{key}: expected a number, got {text!r}", key=key) from None
    if key in INT_KEYS:
        try:
            value = float(text)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {text!r}", key=key) from None
        if not value.is_integer():
            raise ConfigError(f"{key}: expected an integer, got {text!r}", key=key)
        return int(value)
    if key in BOOL_KEYS:
        return _parse_bool(text, key)
    if key in CHOICE_KEYS:
        if text not in CHOICE_KEYS[key]:
            raise ConfigError(
                f"{key}: must be one of {', '.join(CHOICE_KEYS[key])}, got {text!r}", key=key
            )
        return text
    raise ConfigError(f"unknown key {key!r}", key=key)


@dataclass(frozen=True)
class ExperimentConfig:
    slit_width: float = model.SLIT_WIDTH
    slit_separation: float = model.SLIT_SEPARATION
    wavelength: float = model.WAVELENGTH
    distance_z: float = model.DISTANCE_Z
    amplitude: float = 1.0
    normalized_bandwidth: float = model.NORMALIZED_BANDWIDTH
    source: str = "thermal"
    kind: str = "g2"
    scan_mode: str = "antisymmetric"
    x_range: float = 5.5e-3
    x_points: int = 221
    detection: bool = True
    delta: float = DELTA
    eta: float = ETA
    interpretation: str = "fluctuation_scaled"
    detector_width: float = DETECTOR_WIDTH
    detector_averaging: bool = False
    mc_realizations: Optional[int] = None
    mc_seed: Optional[int] = None
    mc_modes: Optional[int] = None
    mc_batches: Optional[int] = None
    mc_chunk_size: Optional[int] = None
    mc_stderr: Optional[str] = None
    quad_half_range: Optional[float] = None
    quad_points: Optional[int] = None

    def __post_init__(self):
        self.slit()
        self.setup()
        self.spectrum()
        self.detection_model()
        self.grid()
        if self.x_points < 2:
            raise ConfigError("x_points must be >= 2", key="x_points")
        try:
            check_request(self.kind, self.scan_mode, self.source)
        except ValueError as exc:
            raise ConfigError(str(exc), key="scan_mode") from None
        if self.detector_averaging and self.detector_width > 2 * self.x_range:
            raise ConfigError("detector_width exceeds the scan span", key="detector_width")
        self.quadrature()
        self.mc_config()

    # typed views -------------------------------------------------------

    def slit(self) -> model.DoubleSlit:
        return model.DoubleSlit(self.slit_width, self.slit_separation)

    def setup(self) -> model.OpticalSetup:
        return model.OpticalSetup(self.wavelength, self.distance_z, self.amplitude)

    def spectrum(self, normalized: Optional[float] = None) -> model.GaussianSpectrum:
        nb = self.normalized_bandwidth if normalized is None else normalized
        if not (nb > 0 and math.isfinite(nb)):
            raise ConfigError(f"normalized_bandwidth must be > 0, got {nb!r}",
                              key="normalized_bandwidth")
        return model.GaussianSpectrum.from_normalized(nb, self.slit())

    def grid(self) -> model.ScanGrid:
        return model.ScanGrid.symmetric(self.x_range, self.x_points)

    def detection_model(self) -> DetectionModel:
        return DetectionModel(self.delta, self.eta, self.detector_width, self.interpretation)

    def quadrature(self, normalized: Optional[float] = None) -> Optional[QuadratureConfig]:
        if self.quad_half_range is None and self.quad_points is None:
            return None
        spec = self.spectrum(normalized)
        default = QuadratureConfig.for_problem(self.slit(), spec)
        try:
            quad = QuadratureConfig(
                default.q_half_range if self.quad_half_range is None else self.quad_half_range,
                default.n_points if self.quad_points is None else self.quad_points,
            )
            quad.check(self.slit(), spec)
        except UnderResolvedError as exc:
            raise ConfigError(str(exc), key="quad_points") from None
        return quad

    @property
    def has_mc(self) -> bool:
        return any(getattr(self, k) is not None for k in MC_KEYS)

    def mc_config(self) -> MonteCarloConfig:
        base = MonteCarloConfig()
        values = {
            "n_realizations": self.mc_realizations,
            "seed": self.mc_seed,
            "n_modes": self.mc_modes,
            "n_batches": self.mc_batches,
            "chunk_size": self.mc_chunk_size,
            "stderr_method": self.mc_stderr,
        }
        keys = dict(zip(values, MC_KEYS))
        chosen = {k: v for k, v in values.items() if v is not None}
        try:
            return replace(base, **chosen)
        except ValueError as exc:
            bad = next((keys[k] for k in chosen if k in str(exc)), "mc_realizations")
            raise ConfigError(str(exc), key=bad) from None

    def request(self, **overrides) -> ScanRequest:
        cfg = replace(self, **overrides) if overrides else self
        spec = cfg.spectrum() if cfg.source == "thermal" else None
        return ScanRequest(cfg.setup(), cfg.slit(), spec, cfg.grid(),
                           cfg.kind, cfg.scan_mode, cfg.source)

    # serialization -----------------------------------------------------

    def items(self):
        """``(key, text)`` pairs for every set key, in declaration order."""
        out = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None:
                continue
            if isinstance(value, bool):
                text = "true" if value else "false"
            elif isinstance(value, float):
                text = repr(value)
            else:
                text = str(value)
            out.append((f.name, text))
        return out

    def matches_reference_experiment(self) -> bool:
        ref = ExperimentConfig()
        keys = ("slit_width", "slit_separation", "wavelength", "distance_z",
                "normalized_bandwidth", "source", "scan_mode", "detection",
                "delta", "eta", "interpretation", "detector_averaging")
        return all(getattr(self, k) == getattr(ref, k) for k in keys)


KNOWN_KEYS = tuple(f.name for f in fields(ExperimentConfig))


def parse_config(text: str, origin: str = "<config>") -> ExperimentConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{origin}:{lineno}: expected 'key = value', got {raw.strip()!r}",
                              line=lineno)
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{origin}:{lineno}: unknown key {key!r}", key=key, line=lineno)
        if key in values:
            raise ConfigError(f"{origin}:{lineno}: duplicate key {key!r}", key=key, line=lineno)
        if not value:
            raise ConfigError(f"{origin}:{lineno}: missing value for {key!r}", key=key, line=lineno)
        try:
            values[key] = _parse_value(key, value)
        except ConfigError as exc:
            raise ConfigError(f"{origin}:{lineno}: {exc}", key=key, line=lineno) from None
    try:
        return ExperimentConfig(**values)
    except ConfigError as exc:
        raise ConfigError(f"{origin}: invalid {exc.key or 'value'}: {exc}", key=exc.key) from None


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{path}: not UTF-8 text ({exc})") from None
    return parse_config(text, origin=str(path))
