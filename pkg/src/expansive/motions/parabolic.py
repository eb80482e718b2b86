""" The parabolic motion class. """
from expansive.algorithms.central_configuration import (
    CentralConfiguration,
    find_central_configuration,
)
from expansive.algorithms.minimize import MAX_ITERS, OPT_TOL
from expansive.asymptotics import (
    FIT_MARGIN,
    ExpansionSpec,
    b_projection_decay,
    chazy_classify,
    expansion_check,
)
from expansive.base import BaseMotion, Regime
from expansive.motions.synthesis import minimize_on_path
from expansive.paths import ParabolicPath
from expansive.potential import PotentialModel
from expansive.system import Configuration, MassSystem


class ParabolicMotion(BaseMotion):
    """A class for synthesising parabolic motions, which shadow the
    homothetic solution of a minimal central configuration.

    Parameters
    ----------
    model : PotentialModel
        With ``alpha`` in ``(0, 2)``.
    x0 : Configuration
        The initial configuration.
    central : CentralConfiguration or None
        The minimal central configuration. Found with ``seed`` when ``None``.
    seed : int
    workers : int
        Threads for the central-configuration search.
    **options
        Grid and problem options.
    """

    def __init__(
        self, model, x0, central=None, seed=0, workers=1, **options
    ):

        super().__init__(model, x0, **options)
        self._check_alpha_range(0, 2, "Parabolic")
        self._check_inputs_same_system(x0)

        if central is None:
            central = find_central_configuration(
                model, seed=seed, workers=workers
            )
        self.central = central
        self.path = ParabolicPath(model, central)

    @classmethod
    def create_from_dictionary(cls, data, **options):
        """Create an instance from the JSON schema with keys ``alpha``,
        ``masses``, ``dim``, ``positions`` and optionally the central
        configuration document under ``central``."""

        system = MassSystem(data["masses"], data.get("dim", 2))
        model = PotentialModel(data["alpha"], system)
        x0 = Configuration(data["positions"], system)
        central = data.get("central")
        if central is not None:
            central = CentralConfiguration.from_dict(central)
        return cls(model, x0, central, **options)

    def solve(self, opt_tol=OPT_TOL, max_iters=MAX_ITERS):
        """ Minimise the action and return the synthesised trajectory. """

        self.report = minimize_on_path(
            self.model, self.path, self.x0, opt_tol, max_iters, **self.options
        )
        self._check_report_converged()
        return self.report.trajectory

    def check_validity(self, tol=1e-4, energy_tol=1e-4):
        """Check the Euler-Lagrange residual and that the energy is zero.
        Raise an ``ExpansiveError`` otherwise."""

        return self._check_residual_and_energy(0.0, tol, energy_tol)

    def check_asymptotics(self, margin=FIT_MARGIN):
        """Check the remainder after ``beta b_m t^(2/(2+alpha))`` grows no
        faster than ``t^(alpha/(2+alpha))``, the decay of its projection on
        ``b_m``, and the parabolic classification."""

        self._check_solved()
        trajectory = self.report.trajectory
        spec = ExpansionSpec.from_path(self.path)

        residual = expansion_check(trajectory, spec, margin)
        classification = chazy_classify(trajectory)
        passed = classification.label is Regime.PARABOLIC
        if residual.fit is not None:
            passed = residual.fit.passed and passed

        projection = None
        if residual.fit is not None:
            projection = b_projection_decay(
                trajectory, self.central, margin=margin
            )
            passed = projection.passed and passed

        self.fits = {
            "classification": classification,
            "expansion": residual,
            "b_projection": projection,
        }
        return bool(passed)
