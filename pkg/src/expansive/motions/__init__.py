""" Top-level imports for the `expansive.motions` subpackage. """

from .hyperbolic import HyperbolicMotion
from .hyperbolic_parabolic import HyperbolicParabolicMotion
from .parabolic import ParabolicMotion
from .synthesis import minimize_on_path, synthesize_trajectory

__all__ = [
    "HyperbolicMotion",
    "HyperbolicParabolicMotion",
    "ParabolicMotion",
    "minimize_on_path",
    "synthesize_trajectory",
]
