"""Penetrable-obstacle scattering for the biharmonic plate equation ``Lap^2 u - k^4 n u = 0``."""

from . import bie, harness, mie_disk, specfun
from .errors import (
    AccuracyError,
    PlacementError,
    ResonanceError,
    ScatteringError,
    SolvabilityError,
)
from .harness import farfield_matrices, nearfield_matrices_disk, nearfield_matrices_kite, spectral_norm
from .mie_disk import DiskProblem, PlaneWave, PointSource, solve_modes

__version__ = "0.1.0"
