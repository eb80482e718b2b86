""" Abstract base classes for inheritance. """
import abc
import enum
import warnings

import numpy as np

from expansive.exceptions import (
    DomainError,
    ExpansiveError,
    NonConvergenceWarning,
)


class Regime(enum.Enum):
    """ The Chazy classes of expansive motions. """

    HYPERBOLIC = "H"
    PARABOLIC = "P"
    HYPERBOLIC_PARABOLIC = "HP"


class BaseReferencePath(metaclass=abc.ABCMeta):
    """An abstract base class for the reference paths ``r_0(t)`` that
    expansive motions are built around.

    Parameters
    ----------
    model : PotentialModel
        The potential and mass system.
    regime : Regime
        The kind of motion the path models.

    Attributes
    ----------
    a : Configuration or None
        The asymptotic velocity. ``None`` for parabolic paths.
    gamma : GammaCoefficients or None
        The correction vectors, for hyperbolic paths.
    parabolic_blocks : list of (float, Configuration) or None
        The scales and central configurations of the parabolic part.
    """

    def __init__(self, model, regime):

        self.model = model
        self.system = model.system
        self.alpha = model.alpha
        self.regime = regime

        self.a = None
        self.gamma = None
        self.parabolic_blocks = None

    def __repr__(self):

        return f"{type(self).__name__}(alpha={self.alpha})"

    @property
    def exponent(self):
        """ The growth exponent ``2 / (2 + alpha)`` of the parabolic part. """

        return 2 / (2 + self.alpha)

    def state(self, t):
        """Evaluate the position, velocity and acceleration of the path.

        Parameters
        ----------
        t : float or array-like
            Times, each at least one.

        Returns
        -------
        tuple of np.ndarray
            Three arrays of shape ``(N, d)`` (or ``(K, N, d)`` for ``K``
            times).
        """

        times = np.asarray(t, dtype=float)
        if np.any(times < 1):
            raise DomainError(t=t, message="Reference paths start at t = 1.")

        position, velocity, acceleration = self._evaluate(times.reshape(-1))
        if times.ndim == 0:
            return position[0], velocity[0], acceleration[0]
        return position, velocity, acceleration

    def _check_alpha_range(self, low, high):
        """ Raise an error if ``alpha`` lies outside ``(low, high)``. """

        if not low < self.alpha < high:
            raise DomainError(
                alpha=self.alpha,
                message=f"{type(self).__name__} needs alpha in "
                f"({low}, {high}).",
            )

    def velocity_limit(self):
        """ The limit of the velocity as ``t`` grows: ``a`` or zero. """

        if self.a is None:
            return np.zeros((self.system.n_bodies, self.system.dim))
        return self.a.coords

    @abc.abstractmethod
    def _evaluate(self, times):
        """A placeholder for the termwise evaluation of the path at a flat
        array of times."""


class BaseMotion(metaclass=abc.ABCMeta):
    """An abstract base class for synthesising expansive motions by action
    minimisation.

    Parameters
    ----------
    model : PotentialModel
        The potential and mass system.
    x0 : Configuration
        The initial configuration at ``t = 1``.
    **options
        Passed on to ``ActionProblem`` (``horizon``, ``tail_mode``,
        ``renormalized``) and to the grid (``n_intervals``).

    Attributes
    ----------
    path : BaseReferencePath or None
        The reference path. Built by the subclass.
    report : SynthesisReport or None
        After solving, the minimisation report is found here. Otherwise,
        ``None``.
    fits : dict or None
        After checking the asymptotics, the fitted exponents are found here.
    """

    def __init__(self, model, x0, **options):

        self.model = model
        self.x0 = x0
        self.options = options
        self.path = None
        self.report = None
        self.fits = None

    def __repr__(self):

        return (
            f"{type(self).__name__}(alpha={self.model.alpha}, "
            f"solved={self.report is not None})"
        )

    def _check_alpha_range(self, low, high, name):
        """ Raise an error if ``alpha`` lies outside ``(low, high)``. """

        alpha = self.model.alpha
        if not low < alpha < high:
            raise DomainError(
                alpha=alpha,
                message=f"{name} motions need alpha in ({low}, {high}).",
            )

    def _check_inputs_same_system(self, *configurations):
        """ Make sure all the inputs belong to the system of the model. """

        for configuration in configurations:
            if configuration.system != self.model.system:
                raise DomainError(
                    system=configuration.system,
                    message="Input does not belong to the model's system.",
                )

    def _check_report_converged(self):
        """ Warn when the minimisation stopped short of its tolerance. """

        if self.report is not None and not self.report.converged:
            warnings.warn(
                NonConvergenceWarning(
                    f"Minimisation stopped after {self.report.iterations} "
                    f"iterations with gradient norm "
                    f"{self.report.gradient_norm:.3g}."
                )
            )

    def _check_solved(self):

        if self.report is None:
            raise ExpansiveError(message="Solve the motion first.")

    def _check_residual_and_energy(self, expected_energy, tol, energy_tol):
        """Raise an ``ExpansiveError`` listing every failed check of the
        Euler-Lagrange residual and the terminal energy."""

        self._check_solved()
        issues = {}
        if not self.report.el_residual <= tol:
            issues["el_residual"] = self.report.el_residual
        if not abs(self.report.energy - expected_energy) <= energy_tol:
            issues["energy"] = (self.report.energy, expected_energy)

        if issues:
            raise ExpansiveError(**issues)

        return True

    @abc.abstractmethod
    def solve(self):
        """ Placeholder for synthesising the motion. """

    @abc.abstractmethod
    def check_validity(self):
        """ Placeholder for checking the synthesised curve solves Newton. """

    @abc.abstractmethod
    def check_asymptotics(self):
        """ Placeholder for checking the expansion of the motion. """
