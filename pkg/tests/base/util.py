""" Useful functions for base class tests. """
import numpy as np
from hypothesis.strategies import composite, floats, integers

from expansive import Configuration, MassSystem, PotentialModel


@composite
def models(draw, min_alpha=0.1, max_alpha=3, min_size=2, max_size=4):
    """A custom strategy for a potential model with random masses."""

    alpha = draw(floats(min_value=min_alpha, max_value=max_alpha))
    size = draw(integers(min_value=min_size, max_value=max_size))
    masses = [draw(floats(min_value=0.5, max_value=2)) for _ in range(size)]

    return PotentialModel(alpha, MassSystem(masses))


@composite
def model_configuration(draw, **kwargs):
    """A custom strategy for a model and a configuration of its system whose
    bodies are well apart."""

    model = draw(models(**kwargs))
    seed = draw(integers(min_value=0, max_value=2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    system = model.system
    while True:
        x = rng.normal(size=(system.n_bodies, system.dim))
        if system.distances(x).min() > 0.2:
            return model, Configuration(x, system)


class FakeReport:
    """ A stand-in for a minimisation report with chosen diagnostics. """

    def __init__(self, el_residual=0.0, energy=0.0, converged=True):

        self.el_residual = el_residual
        self.energy = energy
        self.converged = converged
        self.iterations = 7
        self.gradient_norm = 1e-3
