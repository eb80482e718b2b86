""" The hyperbolic reference path. """
import numpy as np

from expansive.algorithms.gamma import (
    RESONANCE_TOL,
    gamma_coefficients,
    reference_order,
)
from expansive.base import BaseReferencePath, Regime
from expansive.exceptions import DomainError
from expansive.system import is_collision


class HyperbolicPath(BaseReferencePath):
    """The path ``r_0(t) = a t + sum_{k=1}^m Gamma_k t^(1 - k alpha)`` with
    ``m = floor(1 / (2 alpha))``. For ``alpha > 1/2`` the sum is empty.

    Parameters
    ----------
    model : PotentialModel
    a : Configuration
        The collision-free asymptotic velocity.
    gamma : GammaCoefficients or None
        Precomputed correction vectors. Computed from ``a`` when ``None``,
        except for ``alpha = 1`` where there are none.
    """

    def __init__(self, model, a, gamma=None):

        super().__init__(model, Regime.HYPERBOLIC)

        if a.system != model.system:
            raise DomainError(message="a does not belong to the system.")
        if is_collision(a):
            raise DomainError(
                a=a,
                message="Hyperbolic paths need a collision-free velocity; "
                "use a hyperbolic-parabolic path for clustered velocities.",
            )

        self.a = a
        log_case = abs(self.alpha - 1) < RESONANCE_TOL
        if gamma is None and not log_case:
            gamma = gamma_coefficients(model, a)
        self.gamma = gamma

        self.order = reference_order(self.alpha) if self.alpha <= 0.5 else 0
        self._gammas = [
            self.system.coords(self.gamma[k]) for k in range(1, self.order + 1)
        ]

    def _evaluate(self, times):

        t = times[:, None, None]
        a = self.a.coords
        position = a * t
        velocity = np.zeros_like(position) + a
        acceleration = np.zeros_like(position)

        for k, gamma in enumerate(self._gammas, start=1):
            power = 1 - k * self.alpha
            position = position + gamma * t ** power
            velocity = velocity + power * gamma * t ** (power - 1)
            acceleration = acceleration + (
                power * (power - 1) * gamma * t ** (power - 2)
            )

        return position, velocity, acceleration
