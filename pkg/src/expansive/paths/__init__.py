""" Top-level imports for the `expansive.paths` subpackage. """

from .hyperbolic import HyperbolicPath
from .hyperbolic_parabolic import HyperbolicParabolicPath
from .parabolic import ParabolicPath
from .reference import defect, reference_state

__all__ = [
    "HyperbolicParabolicPath",
    "HyperbolicPath",
    "ParabolicPath",
    "defect",
    "reference_state",
]
