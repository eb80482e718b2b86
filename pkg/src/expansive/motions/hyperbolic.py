""" The hyperbolic motion class. """
import numpy as np

from expansive.algorithms.minimize import MAX_ITERS, OPT_TOL
from expansive.asymptotics import (
    FIT_MARGIN,
    ExpansionSpec,
    chazy_classify,
    expansion_check,
)
from expansive.base import BaseMotion, Regime
from expansive.motions.synthesis import minimize_on_path
from expansive.paths import HyperbolicPath
from expansive.potential import PotentialModel
from expansive.system import Configuration, MassSystem


class HyperbolicMotion(BaseMotion):
    """A class for synthesising hyperbolic motions: every mutual distance
    grows linearly and the velocity tends to a collision-free ``a``.

    Parameters
    ----------
    model : PotentialModel
    x0 : Configuration
        The initial configuration.
    a : Configuration
        The collision-free asymptotic velocity.
    gamma : GammaCoefficients or None
        Precomputed correction vectors.
    **options
        Grid and problem options.
    """

    def __init__(self, model, x0, a, gamma=None, **options):

        super().__init__(model, x0, **options)
        self._check_inputs_same_system(x0, a)

        self.a = a
        self.path = HyperbolicPath(model, a, gamma)

    @classmethod
    def create_from_dictionary(cls, data, **options):
        """Create an instance from the JSON schema with keys ``alpha``,
        ``masses``, ``dim``, ``positions`` and ``a``."""

        system = MassSystem(data["masses"], data.get("dim", 2))
        model = PotentialModel(data["alpha"], system)
        x0 = Configuration(data["positions"], system)
        a = Configuration(data["a"], system)
        return cls(model, x0, a, **options)

    def solve(self, opt_tol=OPT_TOL, max_iters=MAX_ITERS):
        """ Minimise the action and return the synthesised trajectory. """

        self.report = minimize_on_path(
            self.model, self.path, self.x0, opt_tol, max_iters, **self.options
        )
        self._check_report_converged()
        return self.report.trajectory

    def check_validity(self, tol=1e-4, energy_tol=1e-3):
        """Check the Euler-Lagrange residual and that the terminal energy is
        ``|a|_M^2 / 2``. Raise an ``ExpansiveError`` otherwise."""

        system = self.model.system
        expected = 0.5 * float(system.inner(self.a.coords, self.a.coords))
        return self._check_residual_and_energy(expected, tol, energy_tol)

    def check_asymptotics(self, margin=FIT_MARGIN):
        """Check the remainder after ``a t`` grows like ``t^(1 - alpha)`` for
        ``alpha > 1/2``, that the full expansion leaves at most
        ``t^(1 - P alpha)`` below one half (or only a constant after the log
        terms at ``alpha = 1`` and ``1/2``), and that the motion classifies
        as hyperbolic."""

        self._check_solved()
        trajectory = self.report.trajectory
        spec = ExpansionSpec.from_path(self.path)

        residual = expansion_check(trajectory, spec, margin)
        classification = chazy_classify(trajectory)
        passed = classification.label is Regime.HYPERBOLIC
        if residual.fit is not None:
            passed = residual.fit.passed and passed

        self.fits = {
            "classification": classification,
            "expansion": residual,
            "velocity_error": float(
                np.abs(classification.velocity - self.a.coords).max()
            ),
        }
        return bool(passed)
