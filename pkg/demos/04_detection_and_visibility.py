# %% [markdown]
# # Detector imperfections and fringe visibility
#
# Real photodetectors add an uncorrelated floor and respond only partly to the
# intensity fluctuations. A two-parameter affine model (delta, eta) captures
# this and brings the ideal visibility down to what an experiment sees.

# %%
import numpy as np

from slitcorr.config import ExperimentConfig
from slitcorr.detection import (
    DetectionModel,
    apply_detection_model,
    finite_detector_average,
    visibility,
)
from slitcorr.model import DoubleSlit, GaussianSpectrum, OpticalSetup, ScanGrid
from slitcorr.presets import compute_preset
from slitcorr.quadrature import scan

setup, slit, grid = OpticalSetup(), DoubleSlit(), ScanGrid.symmetric()
spec = GaussianSpectrum.from_normalized(0.52, slit)
ideal = scan(setup, slit, spec, None, grid, "g2", "antisymmetric")
print(f"ideal g2(x,-x) central visibility: {visibility(ideal).v:.3f}")

# %% [markdown]
# With delta = 0.04 and eta = 0.66 the coincidence value 2 maps to
# 1 + delta + eta^2 = 1.4756 and the fringe contrast drops accordingly.

# %%
model = DetectionModel(delta=0.04, eta=0.66)
modified = apply_detection_model(ideal, model)
result = visibility(modified)
print(f"modified: v = {result.v:.3f}, max {result.max_value:.4f} at {result.x_max * 1e3:.2f} mm,"
      f" min {result.min_value:.4f} at {result.x_min * 1e3:.2f} mm")

literal = apply_detection_model(ideal, DetectionModel(0.04, 0.66, interpretation="literal"))
print(f"literal reading of the model: v = {visibility(literal).v:.3f}")

# %% [markdown]
# The same numbers through the figure presets, including the joint intensity
# g2_mod(x,-x) <I(x)> <I(-x)>.

# %%
defaults = ExperimentConfig()
for preset in ("fig4a", "fig4b"):
    print(f"{preset}: v = {visibility(compute_preset(preset, defaults)).v:.3f}")

# %% [markdown]
# A detector of finite width averages the pattern over its aperture, which can
# only lower the contrast. Sweep the width up to one coherent period.

# %%
for width in (0.0, 0.25e-3, model.detector_width, 1.0e-3, 1.5e-3):
    v = visibility(finite_detector_average(modified, width)).v
    print(f"width {width * 1e3:5.3f} mm: v = {v:.3f}")

# %% [markdown]
# Because both operations are linear, their order does not matter.

# %%
a = finite_detector_average(apply_detection_model(ideal, model), model.detector_width)
b = apply_detection_model(finite_detector_average(ideal, model.detector_width), model)
print(f"max difference between orders: {np.max(np.abs(a.values - b.values)):.1e}")
