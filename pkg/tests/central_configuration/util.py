""" Hypothesis strategies and fixtures for central configuration tests. """
import numpy as np
from hypothesis.strategies import composite, floats, integers, sampled_from

from expansive import Configuration, MassSystem, PotentialModel


def equal_mass_model(alpha, n_bodies, dim=2):

    return PotentialModel(alpha, MassSystem(np.ones(n_bodies), dim))


@composite
def parabolic_models(draw, sizes=(2, 3)):
    """ A custom strategy for equal-mass models with ``alpha`` in (0, 2). """

    alpha = draw(floats(min_value=0.2, max_value=1.8))
    return equal_mass_model(alpha, draw(sampled_from(sizes)))


@composite
def clustered_velocities(draw, max_clusters=3, max_size=3):
    """A custom strategy for velocities whose bodies fall into clusters of
    given sizes. Returns the velocity and the expected classes."""

    n_clusters = draw(integers(min_value=1, max_value=max_clusters))
    sizes = [
        draw(integers(min_value=1, max_value=max_size))
        for _ in range(n_clusters)
    ]
    system = MassSystem(np.ones(sum(sizes)))

    coords, classes, start = [], [], 0
    for label, size in enumerate(sizes):
        angle = 2 * np.pi * label / n_clusters
        velocity = (label + 1) * np.array([np.cos(angle), np.sin(angle)])
        coords.extend([velocity] * size)
        classes.append(tuple(range(start, start + size)))
        start += size

    return Configuration(np.array(coords), system), classes
