"""Second-order interference of thermal-like light behind a double slit.

Modules
-------
model       -- slit geometry, source spectrum, aperture transfer function
quadrature  -- G1, G2 and g2 by Simpson quadrature; coherent and broadband forms
speckle     -- Monte-Carlo speckle ensembles with standard errors
detection   -- imperfect-detection model, finite detectors, fringe visibility
fringes     -- peak detection, fringe counts and periods
config      -- flat key = value experiment configuration
presets     -- figure presets and CSV output
cli         -- ``slitcorr`` command line
"""

__version__ = "0.1.0"
