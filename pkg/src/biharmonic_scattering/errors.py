"""Exception types raised by the solvers."""


class ScatteringError(Exception):
    """Base class for solver failures (CLI exit status 1)."""


class SpecialFunctionRangeError(ValueError):
    """Order outside the supported integer range."""


class SpecialFunctionDomainError(ValueError):
    """Argument at or numerically indistinguishable from a singularity."""


class ResonanceError(ScatteringError):
    """A Fourier-mode system of the disk problem is numerically singular."""


class SolvabilityError(ScatteringError):
    """The boundary-integral block system is numerically singular."""


class PlacementError(ValueError):
    """A point source sits inside or on the scatterer boundary."""


class AccuracyError(ValueError):
    """Field requested too close to the boundary for the smooth quadrature rule."""
