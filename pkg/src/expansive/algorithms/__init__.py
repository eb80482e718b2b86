""" Top-level imports for the `expansive.algorithms` subpackage. """

from .central_configuration import (
    cluster_partition,
    clustered_central_configuration,
    find_central_configuration,
)
from .gamma import gamma_coefficients
from .integrate import (
    euler_lagrange_residual,
    integrate_newton,
    total_energy,
)
from .minimize import minimize_action

__all__ = [
    "cluster_partition",
    "clustered_central_configuration",
    "euler_lagrange_residual",
    "find_central_configuration",
    "gamma_coefficients",
    "integrate_newton",
    "minimize_action",
    "total_energy",
]
