""" The homothetic parabolic reference path. """
import numpy as np

from expansive.base import BaseReferencePath, Regime


def parabolic_terms(shape, exponent, times):
    """Evaluate ``shape t^p`` and its first two derivatives at a flat array of
    times."""

    t = times[:, None, None]
    position = shape * t ** exponent
    velocity = exponent * shape * t ** (exponent - 1)
    acceleration = exponent * (exponent - 1) * shape * t ** (exponent - 2)
    return position, velocity, acceleration


class ParabolicPath(BaseReferencePath):
    """The homothetic path ``r_0(t) = beta b_m t^(2 / (2 + alpha))`` of a
    normalised central configuration.

    Parameters
    ----------
    model : PotentialModel
    central : CentralConfiguration
        The central configuration ``b_m`` and its scale ``beta``.
    """

    def __init__(self, model, central):

        super().__init__(model, Regime.PARABOLIC)
        self._check_alpha_range(0, 2)

        self.central = central
        self.beta = central.beta
        self.b_m = central.b_m
        self.parabolic_blocks = [(self.beta, self.b_m)]
        self.shape = self.beta * self.b_m.coords

    def _evaluate(self, times):

        return parabolic_terms(self.shape, self.exponent, times)

    def velocity_limit(self):

        return np.zeros_like(self.shape)
