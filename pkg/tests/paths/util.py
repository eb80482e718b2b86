""" Hypothesis strategies and fixtures for reference path tests. """
import numpy as np
from hypothesis.strategies import composite, floats, integers

from expansive import Configuration, MassSystem, PotentialModel

MASSES = [1.0, 2.0, 1.5]
VELOCITY = [[1.0, 0.0], [-1.0, 0.5], [0.2, -1.0]]


def hyperbolic_model(alpha, scale=1.0):
    """ A three-body model with a fixed collision-free velocity. """

    system = MassSystem(MASSES)
    a = Configuration(scale * np.array(VELOCITY), system)
    return PotentialModel(alpha, system), a


def random_velocity(alpha, seed, separation=4.0):
    """The three-body model of ``hyperbolic_model`` with a random velocity
    rescaled so its closest pair is ``separation`` apart."""

    system = MassSystem(MASSES)
    coords = np.random.default_rng(seed).normal(size=(3, 2))
    coords = separation / system.distances(coords).min() * coords
    return PotentialModel(alpha, system), Configuration(coords, system)


@composite
def velocities(draw, min_alpha=0.05, max_alpha=3):
    """A custom strategy for a model and a random collision-free asymptotic
    velocity. ``alpha`` keeps away from the resonances of its expansion."""

    alpha = draw(floats(min_value=min_alpha, max_value=max_alpha))
    order = int(np.floor(1 / (2 * alpha))) + 2
    for k in range(1, order + 1):
        if abs(k * alpha - 1) < 1e-2:
            alpha = alpha + 2e-2 / k

    seed = draw(integers(min_value=0, max_value=2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    system = MassSystem(rng.uniform(0.5, 2, size=3))
    while True:
        a = rng.normal(size=(3, 2))
        if system.distances(a).min() > 0.3:
            return PotentialModel(alpha, system), Configuration(a, system)
