""" Synthetic trajectories and strategies for the asymptotic checks. """
import functools

import numpy as np
from hypothesis.strategies import composite, floats

from expansive import Configuration, MassSystem, PotentialModel
from expansive.algorithms.central_configuration import (
    find_central_configuration,
)
from expansive.paths import HyperbolicPath, ParabolicPath
from expansive.trajectory import Trajectory

SYSTEM = MassSystem([1.0, 1.0, 1.0])
VELOCITY = np.array([[1.0, 0.0], [-1.0, 0.5], [0.2, -1.0]])
TIMES = np.geomspace(1, 1e6, 400)


def synthetic_trajectory(terms, alpha, times=TIMES, system=SYSTEM):
    """Build a trajectory from ``(coefficient, exponent)`` terms, where an
    exponent of ``"log"`` stands for ``log t``."""

    t = times[:, None, None]
    positions = np.zeros((times.size,) + system.coords(terms[0][0]).shape)
    velocities = np.zeros_like(positions)
    for coefficient, exponent in terms:
        coefficient = np.asarray(coefficient, dtype=float)
        if exponent == "log":
            positions = positions + coefficient * np.log(t)
            velocities = velocities + coefficient / t
        else:
            positions = positions + coefficient * t ** exponent
            velocities = velocities + exponent * coefficient * t ** (
                exponent - 1
            )

    return Trajectory(
        times, positions, velocities, system, alpha, "reference"
    )


def hp_trajectory(alpha=1.0):
    """Two bodies sharing the velocity ``(5, 0)`` drift apart like
    ``t^(2/(2+alpha))`` while the third body leaves at ``(-10, 0)``."""

    linear = np.array([[5.0, 0.0], [5.0, 0.0], [-10.0, 0.0]])
    spread = np.array([[0.0, 1.0], [0.0, -1.0], [0.0, 0.0]])
    return synthetic_trajectory(
        [(linear, 1.0), (spread, 2 / (2 + alpha))], alpha
    )


def circular_trajectory(times=None):
    """ Two unit masses on a circular Newtonian orbit of period ``4 pi``. """

    times = np.geomspace(1, 1e3, 500) if times is None else times
    angle = times / 2
    unit = np.stack([np.cos(angle), np.sin(angle)], axis=-1)
    turn = np.stack([-np.sin(angle), np.cos(angle)], axis=-1)
    positions = np.stack([unit, -unit], axis=1)
    velocities = 0.5 * np.stack([turn, -turn], axis=1)

    return Trajectory(
        times, positions, velocities, MassSystem([1.0, 1.0]), 1.0, "reference"
    )


def hyperbolic_path(alpha):

    model = PotentialModel(alpha, SYSTEM)
    return HyperbolicPath(model, Configuration(VELOCITY, SYSTEM))


@functools.lru_cache(maxsize=None)
def parabolic_path(alpha=1.0):
    """ The homothetic path of a minimal three-body central configuration. """

    model = PotentialModel(alpha, SYSTEM)
    return ParabolicPath(model, find_central_configuration(model, seed=0))


@composite
def power_laws(draw):
    """ A custom strategy for the exponent and scale of a power law. """

    exponent = draw(floats(min_value=-2, max_value=2))
    coefficient = draw(floats(min_value=1e-3, max_value=1e3))
    return exponent, coefficient
