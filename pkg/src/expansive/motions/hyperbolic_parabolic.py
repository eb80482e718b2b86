""" The hyperbolic-parabolic motion class. """
import logging

from expansive.algorithms.minimize import MAX_ITERS, OPT_TOL
from expansive.asymptotics import (
    FIT_MARGIN,
    ExpansionSpec,
    chazy_classify,
    cluster_center_drift,
    expansion_check,
)
from expansive.base import BaseMotion, Regime
from expansive.motions.synthesis import minimize_on_path
from expansive.paths import HyperbolicParabolicPath, HyperbolicPath
from expansive.potential import PotentialModel
from expansive.system import Configuration, MassSystem

logger = logging.getLogger(__name__)


class HyperbolicParabolicMotion(BaseMotion):
    """A class for synthesising hyperbolic-parabolic motions: clusters of
    bodies sharing an asymptotic velocity separate linearly while each
    cluster expands parabolically.

    When every cluster is a singleton the motion is hyperbolic, and the
    hyperbolic path is used so both constructions solve the same problem.

    Parameters
    ----------
    model : PotentialModel
        With ``alpha`` in ``(1/2, 2)``.
    x0 : Configuration
    a : Configuration
        A non-zero asymptotic velocity, possibly with coinciding entries.
    clustered : ClusteredCentralConfiguration or None
    eps_cluster : float or None
    seed : int
        The seed of the cluster central-configuration searches.
    workers : int
        Threads for each of those searches.
    **options
        Grid and problem options.
    """

    def __init__(
        self,
        model,
        x0,
        a,
        clustered=None,
        eps_cluster=None,
        seed=0,
        workers=1,
        **options,
    ):

        super().__init__(model, x0, **options)
        self._check_alpha_range(0.5, 2, "Hyperbolic-parabolic")
        self._check_inputs_same_system(x0, a)

        self.a = a
        self.path = HyperbolicParabolicPath(
            model, a, clustered, eps_cluster, seed=seed, workers=workers
        )
        self.partition = self.path.partition
        if self.partition.is_trivial:
            logger.info("Every cluster is a singleton; using a hyperbolic path.")
            self.path = HyperbolicPath(model, a)

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
        """Check the remainder after ``a t + beta b_m t^(2/(2+alpha))`` grows
        no faster than ``t^delta`` with ``delta = max(1 - alpha,
        alpha / (2 + alpha))``, and the growth of intra- and inter-cluster
        distances."""

        self._check_solved()
        trajectory = self.report.trajectory
        spec = ExpansionSpec.from_path(self.path)
        expected = self.path.regime

        residual = expansion_check(trajectory, spec, margin)
        classification = chazy_classify(trajectory)
        passed = classification.label is expected
        if residual.fit is not None:
            passed = residual.fit.passed and passed

        intra = self.partition.pair_mask()
        exponents = classification.pair_exponents
        self.fits = {
            "classification": classification,
            "expansion": residual,
            "intra_exponents": {
                pair: exponents[pair]
                for pair, inside in zip(exponents, intra)
                if inside
            },
            "inter_exponents": {
                pair: exponents[pair]
                for pair, inside in zip(exponents, intra)
                if not inside
            },
            "cluster_drift": cluster_center_drift(trajectory, self.partition),
        }
        return bool(passed)
