"""Exception types raised across the package."""


class SlitcorrError(Exception):
    """Base class for all package errors."""


class ConfigError(SlitcorrError, ValueError):
    """Invalid configuration value or file.

    ``key`` names the offending setting and ``line`` the 1-based line number
    in a config file, when known.
    """

    def __init__(self, message, key=None, line=None):
        super().__init__(message)
        self.key = key
        self.line = line


class UnderResolvedError(SlitcorrError, ValueError):
    """Quadrature grid too coarse for the integrand."""


class DegenerateDenominatorError(SlitcorrError, ArithmeticError):
    """A normalizing intensity vanished (detector outside the illuminated region)."""


class NoFringeError(SlitcorrError, ValueError):
    """No fringe (extremum) found inside the analysis window."""


class GridMismatchError(SlitcorrError, ValueError):
    """Two curves that must share a grid do not."""


class InsufficientRealizationsError(SlitcorrError, ValueError):
    pass


class NonFiniteError(SlitcorrError, FloatingPointError):
    pass
