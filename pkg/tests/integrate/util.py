""" Fixtures and strategies for integration and trajectory tests. """
import numpy as np
from hypothesis.strategies import composite, floats, integers

from expansive import Configuration, MassSystem, PotentialModel

PERIOD = 4 * np.pi


def circular_orbit():
    """A two-body circular orbit of period ``4 pi`` for the Newtonian
    potential with unit masses."""

    system = MassSystem([1.0, 1.0])
    model = PotentialModel(1.0, system)
    x0 = Configuration([[1.0, 0.0], [-1.0, 0.0]], system)
    v0 = np.array([[0.0, 0.5], [0.0, -0.5]])
    return model, x0, v0


def head_on():
    """Two bodies released at rest with a distant third, which collide at
    ``t = 1 + pi / sqrt(2)`` up to the pull of the third body."""

    system = MassSystem([1.0, 1.0, 1.0])
    model = PotentialModel(1.0, system)
    x0 = Configuration([[1.0, 0.0], [-1.0, 0.0], [0.0, 100.0]], system)
    return model, x0, np.zeros((3, 2))


@composite
def polynomials(draw, max_degree=4):
    """A custom strategy for a polynomial of small degree and a sorted,
    irregular set of sample times."""

    degree = draw(integers(min_value=0, max_value=max_degree))
    coefficients = [
        draw(floats(min_value=-2, max_value=2)) for _ in range(degree + 1)
    ]
    seed = draw(integers(min_value=0, max_value=2 ** 32 - 1))
    size = draw(integers(min_value=5, max_value=30))

    rng = np.random.default_rng(seed)
    steps = rng.uniform(0.05, 0.2, size=size - 1)
    times = 1 + np.concatenate([[0], np.cumsum(steps)])
    return np.polynomial.Polynomial(coefficients), times


def hyperbolic_model(alpha):
    """ A three-body model and a collision-free asymptotic velocity. """

    system = MassSystem([1.0, 2.0, 1.5])
    a = Configuration([[1.0, 0.0], [-1.0, 0.5], [0.2, -1.0]], system)
    return PotentialModel(alpha, system), a
