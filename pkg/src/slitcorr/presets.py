"""Figure presets: named detector scans of the reference experiment.

Each preset fixes the source, the correlation and the detector motion;
geometry, grid and detection parameters come from an :class:`ExperimentConfig`.
Presets ``fig1*`` also fix the source bandwidth (10 and 0.52). Unnormalized
curves are divided by their value at x = 0, so the arbitrary amplitude and
spectrum prefactors drop out.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .config import ExperimentConfig
from .csvio import atomic_write, render_curve
from .curves import CorrelationCurve
from .detection import apply_detection_model, finite_detector_average, joint_intensity
from .speckle import MonteCarloConfig, ScanRequest, estimate

ROUTES = ("quadrature", "monte_carlo")
X_RANGE_NOTE = "scan extent is a chosen default; the original figure axes are not given numerically"


@dataclass(frozen=True)
class Preset:
    description: str
    source: str
    kind: str
    scan_mode: str
    bandwidth: Optional[float] = None
    detection: bool = False


PRESETS = {
    "fig1a": Preset("G2(x,-x), thermal, wb/(2pi)=10", "thermal", "G2", "antisymmetric", 10.0),
    "fig1b": Preset("G2(x,-x), thermal, wb/(2pi)=0.52", "thermal", "G2", "antisymmetric", 0.52),
    "fig1c": Preset("G2(x,-x), coherent", "coherent", "G2", "antisymmetric"),
    "fig1d": Preset("g2(x,-x), thermal, wb/(2pi)=10", "thermal", "g2", "antisymmetric", 10.0),
    "fig1e": Preset("g2(x,-x), thermal, wb/(2pi)=0.52", "thermal", "g2", "antisymmetric", 0.52),
    "fig1f": Preset("g2(x,-x), coherent", "coherent", "g2", "antisymmetric"),
    "fig3a": Preset("intensity G1(x,x), thermal", "thermal", "G1", "intensity"),
    "fig3b": Preset("intensity G1(x,x), coherent", "coherent", "G1", "intensity"),
    "fig4a": Preset("modified g2(x,-x), thermal", "thermal", "g2", "antisymmetric", detection=True),
    "fig4b": Preset("modified G2(x,-x), thermal", "thermal", "G2", "antisymmetric", detection=True),
    "fig4c": Preset("G2(x,-x), coherent", "coherent", "G2", "antisymmetric"),
    "fig5a": Preset("modified g2(x,x), thermal", "thermal", "g2", "symmetric", detection=True),
    "fig5b": Preset("G2(x,x), coherent", "coherent", "G2", "symmetric"),
    "fig6": Preset("modified g2(x,0), thermal", "thermal", "g2", "fixed_zero", detection=True),
}


def preset_config(preset_id: str, config: ExperimentConfig) -> ExperimentConfig:
    """The effective configuration a preset runs with."""
    try:
        p = PRESETS[preset_id]
    except KeyError:
        raise KeyError(
            f"unknown preset {preset_id!r}; choose from {', '.join(PRESETS)}"
        ) from None
    changes = dict(source=p.source, kind=p.kind, scan_mode=p.scan_mode)
    if p.bandwidth is not None:
        changes["normalized_bandwidth"] = p.bandwidth
    if not p.detection:
        changes["detection"] = False
    return replace(config, **changes)


def evaluate(request: ScanRequest, config: ExperimentConfig, route: str = "quadrature",
             workers: int = 1) -> CorrelationCurve:
    """Evaluate a raw scan by quadrature or Monte Carlo."""
    if route == "quadrature":
        quad = config.quadrature() if request.source == "thermal" else None
        return request.quadrature(quad)
    if route == "monte_carlo":
        return estimate(request, config.mc_config(), workers=workers)
    raise ValueError(f"route must be one of {ROUTES}, got {route!r}")


def _partner_marginal(intensity: CorrelationCurve, scan_mode: str) -> np.ndarray:
    v = intensity.values
    if scan_mode == "antisymmetric":
        return v[::-1]
    if scan_mode == "symmetric":
        return v
    return np.full_like(v, v[intensity.center_index()])


def detected_curve(config: ExperimentConfig, route: str = "quadrature",
                   workers: int = 1) -> CorrelationCurve:
    """Scan described by ``config`` with the detection chain applied.

    The (delta, eta) model is applied to thermal normalized curves when
    ``config.detection`` is set. For a thermal G2 request with detection the
    result is the modified joint intensity ``g2_mod * <I(x1)> <I(x2)>``.
    Unnormalized curves are divided by their value at x = 0.
    """
    request = config.request()
    apply = config.detection and config.source == "thermal"
    if apply and config.kind in ("g2", "G2"):
        g2 = evaluate(replace(request, kind="g2"), config, route, workers)
        g2 = apply_detection_model(g2, config.detection_model())
        if config.detector_averaging:
            g2 = finite_detector_average(g2, config.detector_width)
        if config.kind == "g2":
            return g2
        intensity = evaluate(replace(request, kind="G1", scan_mode="intensity"),
                             config, route, workers)
        product = intensity.values * _partner_marginal(intensity, config.scan_mode)
        return joint_intensity(g2, product).normalized_to_center()
    curve = evaluate(request, config, route, workers)
    if curve.kind != "g2":
        curve = curve.normalized_to_center()
    return curve


def compute_preset(preset_id: str, config: ExperimentConfig, route: str = "quadrature",
                   workers: int = 1) -> CorrelationCurve:
    return detected_curve(preset_config(preset_id, config), route, workers)


def header_items(preset_id: Optional[str], config: ExperimentConfig, route: str):
    items = [("slitcorr", __version__)]
    if preset_id is not None:
        items += [("preset", preset_id), ("description", PRESETS[preset_id].description)]
    items += [("route", route), ("x_range_note", X_RANGE_NOTE)]
    if config.kind != "g2":
        items.append(("normalization", "divided by the value at x = 0"))
    if route == "monte_carlo":
        mc: MonteCarloConfig = config.mc_config()
        items += [("seed", str(mc.seed)), ("n_realizations", str(mc.n_realizations))]
    items += [(f"config.{k}", v) for k, v in config.items()]
    return items


def plot_script(entries, ylabel: str = "correlation") -> str:
    """Gnuplot script plotting ``(preset_id, csv_name, has_stderr)`` entries."""
    lines = [
        "# gnuplot script generated by slitcorr",
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
        "set xlabel 'x (mm)'",
        f"set ylabel '{ylabel}'",
    ]
    plots = []
    for preset_id, name, has_stderr in entries:
        plots.append(f"'{name}' using ($1*1e3):2 with lines title '{preset_id}'")
        if has_stderr:
            plots.append(f"'{name}' using ($1*1e3):2:3 with yerrorbars notitle")
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def run_figure(preset_id: str, config: ExperimentConfig, out_dir, route: str = "quadrature",
               workers: int = 1, emit_plotscript: bool = False):
    """Compute a preset and write ``<preset_id>.csv`` (and optionally ``.gp``) into ``out_dir``."""
    effective = preset_config(preset_id, config)
    curve = detected_curve(effective, route, workers)
    out_dir = Path(out_dir)
    paths = [atomic_write(out_dir / f"{preset_id}.csv",
                          render_curve(curve, header_items(preset_id, effective, route)))]
    if emit_plotscript:
        script = plot_script([(preset_id, paths[0].name, curve.stderr is not None)],
                             ylabel=PRESETS[preset_id].description)
        paths.append(atomic_write(out_dir / f"{preset_id}.gp", script))
    return paths
