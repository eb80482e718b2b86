""" Top-level imports for the library. """

import sys

if not sys.warnoptions:
    import warnings

    warnings.simplefilter("always")

from .base import BaseMotion, BaseReferencePath, Regime
from .potential import PotentialModel
from .system import Configuration, MassSystem
from .version import __version__

__all__ = [
    "BaseMotion",
    "BaseReferencePath",
    "Configuration",
    "MassSystem",
    "PotentialModel",
    "Regime",
    "__version__",
]
