"""``slitcorr`` command line: figure presets, scans, MC validation, visibility.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical or
validation failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import ExperimentConfig, load_config
from .csvio import atomic_write, read_table, render_curve, render_table
from .curves import CorrelationCurve
from .detection import visibility
from .errors import ConfigError, GridMismatchError, SlitcorrError
from .model import ScanGrid
from .presets import PRESETS, detected_curve, header_items, plot_script, run_figure
from .speckle import compare_with_quadrature, estimate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2

# Visibilities measured in the reference experiment (thermal source, x and -x).
REFERENCE_VISIBILITY = {"g2": 0.214, "G2": 0.160}
MIN_FRACTION_WITHIN = 0.99


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _config(args) -> ExperimentConfig:
    return load_config(args.config) if args.config else ExperimentConfig()


def _route(args) -> str:
    return "monte_carlo" if getattr(args, "mc", False) else "quadrature"


def cmd_figure(args) -> int:
    config = _config(args)
    ids = list(PRESETS) if args.preset == "all" else [args.preset]
    if ids[0] not in PRESETS:
        print(f"unknown preset {args.preset!r}; choose from {', '.join(PRESETS)} or all",
              file=sys.stderr)
        return EXIT_USAGE
    written = []
    for preset_id in ids:
        written += run_figure(preset_id, config, args.out, _route(args), args.workers,
                              emit_plotscript=False)
    if args.emit_plotscript:
        entries = [(p, f"{p}.csv", _route(args) == "monte_carlo") for p in ids]
        name = f"{ids[0]}.gp" if len(ids) == 1 else "figures.gp"
        written.append(atomic_write(Path(args.out) / name, plot_script(entries)))
    for path in written:
        print(path)
    return EXIT_OK


def cmd_scan(args) -> int:
    config = _config(args)
    route = _route(args)
    curve = detected_curve(config, route, args.workers)
    text = render_curve(curve, header_items(None, config, route))
    if args.out:
        print(atomic_write(args.out, text))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _load_reference(path, scan_mode, kind) -> CorrelationCurve:
    _, cols = read_table(path)
    try:
        x, values = cols["x_m"], cols["value"]
    except KeyError:
        raise ConfigError(f"{path}: reference CSV needs x_m and value columns") from None
    return CorrelationCurve(ScanGrid(x), values, kind, scan_mode)


def run_validation(config: ExperimentConfig, workers: int = 1, reference_path=None):
    """Monte Carlo against quadrature on the configured scan (no detection model)."""
    if not config.has_mc:
        raise ConfigError("validate needs a Monte-Carlo section (e.g. mc_realizations, mc_seed)",
                          key="mc_realizations")
    request = config.request()
    if reference_path is not None:
        reference = _load_reference(reference_path, config.scan_mode, config.kind)
    else:
        quad = config.quadrature() if config.source == "thermal" else None
        reference = request.quadrature(quad)
    est = estimate(request, config.mc_config(), workers=workers)
    report = compare_with_quadrature(est, reference)
    return est, reference, report


def cmd_validate(args) -> int:
    config = _config(args)
    try:
        est, ref, report = run_validation(config, args.workers, args.reference)
    except GridMismatchError as exc:
        print(f"grid mismatch: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    mc = config.mc_config()
    ok = report.passed(MIN_FRACTION_WITHIN)
    print(f"validate {config.kind}/{config.scan_mode} source={config.source} "
          f"n={mc.n_realizations} seed={mc.seed}")
    print(report.summary())
    print(f"median stderr = {np.median(est.stderr):.6g}")
    print("PASS" if ok else "FAIL",
          f"(need >= {100 * MIN_FRACTION_WITHIN:.0f}% of points within 3 sigma)")
    if args.out:
        items = header_items(None, config, "monte_carlo") + [
            ("max_abs_z", f"{report.max_abs_z:.6g}"),
            ("fraction_within_3_sigma", f"{report.fraction_within:.6g}"),
        ]
        z = np.where(np.isfinite(report.z), report.z, np.sign(report.z) * 1e308)
        text = render_table(items, {"x_m": est.x, "estimate": est.values, "stderr": est.stderr,
                                    "reference": ref.values, "z": z})
        print(atomic_write(args.out, text))
    return EXIT_OK if ok else EXIT_FAILURE


def run_visibility(config: ExperimentConfig, route: str = "quadrature", workers: int = 1):
    curve = detected_curve(config, route, workers)
    result = visibility(curve)
    target = None
    if config.matches_reference_experiment() and config.scan_mode == "antisymmetric":
        target = REFERENCE_VISIBILITY.get(config.kind)
    return result, target


def cmd_visibility(args) -> int:
    config = _config(args)
    result, target = run_visibility(config, _route(args), args.workers)
    print(f"{config.kind}/{config.scan_mode} source={config.source}")
    print(f"visibility = {result.v:.3f}")
    print(f"maximum {result.max_value:.6g} at x = {result.x_max * 1e3:.4f} mm")
    print(f"minimum {result.min_value:.6g} at x = {result.x_min * 1e3:.4f} mm")
    print(f"window = [{result.window[0] * 1e3:.4f}, {result.window[1] * 1e3:.4f}] mm")
    if target is not None:
        print(f"measured value in the reference experiment = {target:.3f} "
              f"(difference {result.v - target:+.3f})")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slitcorr", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"slitcorr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, mc_flag=True, workers=True):
        p.add_argument("--config", metavar="F", help="key = value configuration file")
        if mc_flag:
            p.add_argument("--mc", action="store_true",
                           help="evaluate by Monte Carlo instead of quadrature")
        if workers:
            p.add_argument("--workers", type=int, default=1, metavar="N",
                           help="threads for Monte Carlo (results do not depend on N)")

    p = sub.add_parser("figure", help="write CSV for a figure preset")
    p.add_argument("preset", help=f"one of {', '.join(PRESETS)}, or all")
    common(p)
    p.add_argument("--out", default=".", metavar="DIR", help="output directory")
    p.add_argument("--emit-plotscript", action="store_true",
                   help="also write a gnuplot script referencing the CSV files")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("scan", help="evaluate the scan described by the configuration")
    common(p)
    p.add_argument("--out", metavar="FILE", help="CSV file (default: stdout)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("validate", help="compare Monte Carlo against quadrature")
    common(p, mc_flag=False)
    p.add_argument("--reference", metavar="CSV",
                   help="compare against this curve instead of computing the quadrature")
    p.add_argument("--out", metavar="FILE", help="per-point comparison CSV")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("visibility", help="central-fringe visibility of the configured scan")
    common(p)
    p.set_defaults(func=cmd_visibility)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except (ConfigError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"slitcorr: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SlitcorrError, ArithmeticError, ValueError) as exc:
        print(f"slitcorr: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
