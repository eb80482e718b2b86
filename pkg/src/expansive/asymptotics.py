""" Power-law fits, expansion checks and the Chazy classification. """
import logging
import math
import warnings
from typing import NamedTuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from expansive.algorithms.gamma import (
    RESONANCE_TOL,
    expansion_order,
    gamma_coefficients,
)
from expansive.base import Regime
from expansive.exceptions import (
    ClassificationError,
    ConditioningWarning,
    DimensionError,
    DomainError,
    OneSidedBoundWarning,
)
from expansive.potential import PotentialModel

logger = logging.getLogger(__name__)

FIT_MARGIN = 0.05
MIN_R2 = 0.9
MIN_POINTS = 10
LOG_SAMPLES = 200
CONDITION_LIMIT = 1e12
NOISE_FLOOR = 1e-10
CLASS_TOLERANCE = 0.1


def default_window(times):
    """ The tail window ``[sqrt(T), T]`` of a sample range. """

    horizon = float(times[-1])
    return max(float(times[0]), math.sqrt(horizon)), horizon


class PowerLawFit:
    """A least-squares fit ``y ~ coefficient * t^exponent``.

    Attributes
    ----------
    bound : float or None
        The theoretical exponent the fit was checked against, if any.
    passed : bool or None
        The outcome of that check.
    """

    def __init__(
        self,
        exponent,
        coefficient,
        r_squared,
        window,
        log_spacing=True,
        n_points=None,
    ):

        self.exponent = float(exponent)
        self.coefficient = float(coefficient)
        self.r_squared = float(r_squared)
        self.window = tuple(float(w) for w in window)
        self.log_spacing = bool(log_spacing)
        self.n_points = n_points
        self.bound = None
        self.passed = None

    def __repr__(self):

        return (
            f"PowerLawFit(exponent={self.exponent:.4f}, "
            f"coefficient={self.coefficient:.4g}, r2={self.r_squared:.4f})"
        )

    def predict(self, t):

        return self.coefficient * np.asarray(t, dtype=float) ** self.exponent

    def check_bound(self, bound, margin=FIT_MARGIN):
        """Check the one-sided claim ``exponent <= bound`` up to ``margin``.
        A fit above the bound but inside the margin passes with a
        ``OneSidedBoundWarning``."""

        self.bound = float(bound)
        self.passed = self.exponent <= bound + margin
        if bound < self.exponent <= bound + margin:
            warnings.warn(
                OneSidedBoundWarning(
                    f"Fitted exponent {self.exponent:.4f} exceeds the bound "
                    f"{bound:.4f} but lies within the margin {margin}."
                )
            )

        return self.passed

    def to_dict(self):

        return {
            "exponent": self.exponent,
            "coefficient": self.coefficient,
            "r2": self.r_squared,
            "window": list(self.window),
            "bound": self.bound,
            "pass": self.passed,
        }


def _series_norms(values):

    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        return values
    return np.linalg.norm(values.reshape(values.shape[0], -1), axis=1)


def fit_power_law(times, values, window=None, log_spacing=True):
    """Fit a line to ``(log t, log y)`` over a time window.

    Parameters
    ----------
    times : array-like
        Increasing positive times.
    values : array-like
        Positive values, or vectors whose Euclidean norms are fitted.
    window : tuple of float or None
        The range ``(t_lo, t_hi)`` to fit over; ``[sqrt(T), T]`` by default.
    log_spacing : bool
        Whether to resample ``log y`` on ``LOG_SAMPLES`` log-spaced times
        first, so that dense stretches of samples do not dominate.

    Returns
    -------
    PowerLawFit

    Raises
    ------
    DomainError
        For fewer than ``MIN_POINTS`` samples in the window, or non-positive
        values there.
    """

    times = np.asarray(times, dtype=float)
    values = _series_norms(values)
    if times.shape != values.shape:
        raise DimensionError(times=times.shape, values=values.shape)

    low, high = default_window(times) if window is None else window
    inside = (times >= low) & (times <= high)
    if inside.sum() < MIN_POINTS:
        raise DomainError(
            window=(low, high),
            points=int(inside.sum()),
            message=f"Need at least {MIN_POINTS} samples in the window.",
        )
    if np.any(times[inside] <= 0) or np.any(values[inside] <= 0):
        raise DomainError(
            window=(low, high),
            message="Log fits need positive data; subtract constants first.",
        )

    log_t, log_y = np.log(times[inside]), np.log(values[inside])
    if log_spacing:
        grid = np.linspace(log_t[0], log_t[-1], LOG_SAMPLES)
        log_t, log_y = grid, np.interp(grid, log_t, log_y)

    slope, intercept = np.polyfit(log_t, log_y, 1)
    predicted = slope * log_t + intercept
    total = np.sum((log_y - log_y.mean()) ** 2)
    error = np.sum((log_y - predicted) ** 2)
    r_squared = 1.0 if total == 0 else max(0.0, 1 - error / total)

    return PowerLawFit(
        slope,
        math.exp(intercept),
        r_squared,
        (low, high),
        log_spacing,
        int(inside.sum()),
    )


class ExpansionTerm(NamedTuple):
    """One term ``coefficient * t^exponent`` (or ``* log t``) of an
    expansion. The coefficients of log terms are refitted from data."""

    name: str
    coefficient: object
    exponent: float
    log: bool = False

    def evaluate(self, times, coefficient=None):

        coefficient = self.coefficient if coefficient is None else coefficient
        times = np.asarray(times, dtype=float)
        scale = np.log(times) if self.log else times ** self.exponent
        return scale[:, None, None] * np.asarray(coefficient)


def remainder_bound(regime, alpha):
    """The exponent ``delta`` of the remainder after the regime's terms."""

    regime = Regime(regime)
    if regime is Regime.PARABOLIC:
        return alpha / (2 + alpha)
    if regime is Regime.HYPERBOLIC_PARABOLIC:
        return max(1 - alpha, alpha / (2 + alpha))
    if alpha > 1 + RESONANCE_TOL:
        return 1 - alpha
    if alpha < 0.5 - RESONANCE_TOL:
        return 1 - expansion_order(alpha) * alpha
    return 0.0


class ExpansionSpec:
    """The asymptotic expansion of a regime, term by term.

    Parameters
    ----------
    regime : Regime or str
    alpha : float
    terms : list of ExpansionTerm
        In order of decreasing growth.
    remainder_exponent : float
        The exponent ``delta`` bounding what remains.
    constant : bool
        Whether a constant vector belongs to the expansion.
    """

    def __init__(self, regime, alpha, terms, remainder_exponent, constant):

        self.regime = Regime(regime)
        self.alpha = float(alpha)
        self.terms = list(terms)
        self.remainder_exponent = float(remainder_exponent)
        self.constant = bool(constant)

    def __repr__(self):

        names = ", ".join(term.name for term in self.terms)
        return (
            f"ExpansionSpec(regime={self.regime.value}, alpha={self.alpha}, "
            f"terms=[{names}], delta={self.remainder_exponent:.4f})"
        )

    @classmethod
    def from_path(cls, path):
        """Build the expansion of the motions shadowing ``path``.

        Hyperbolic paths use ``a t`` and the correction vectors: one for
        ``alpha > 1``, two for ``alpha`` in ``(1/2, 1)``, ``P`` below one
        half and the log terms at ``alpha = 1`` and ``alpha = 1/2``. The
        parabolic part of the other regimes is ``beta b_m t^(2/(2+alpha))``.
        """

        alpha, model = path.alpha, path.model
        regime = path.regime
        delta = remainder_bound(regime, alpha)
        exponent = 2 / (2 + alpha)

        if regime is Regime.PARABOLIC:
            terms = [ExpansionTerm("parabolic", path.shape, exponent)]
            return cls(regime, alpha, terms, delta, False)

        a = path.a.coords
        terms = [ExpansionTerm("linear", a, 1.0)]
        if regime is Regime.HYPERBOLIC_PARABOLIC:
            terms.append(ExpansionTerm("parabolic", path.shape, exponent))
            return cls(regime, alpha, terms, delta, False)

        system = model.system
        if abs(alpha - 1) < RESONANCE_TOL:
            log_term = -model.mass_gradient(a)
            terms.append(ExpansionTerm("log", log_term, 0.0, log=True))
            return cls(regime, alpha, terms, delta, True)

        half = math.isclose(alpha, 0.5, rel_tol=1e-12)
        order = 2 if 0.5 < alpha < 1 else None
        gamma = path.gamma
        if gamma is None or (order and len(gamma) < order):
            gamma = gamma_coefficients(model, path.a, order)

        for k in range(1, len(gamma) + 1):
            terms.append(
                ExpansionTerm(
                    f"gamma_{k}", system.coords(gamma[k]), 1 - k * alpha
                )
            )
        if half:
            tilde = system.coords(gamma.tilde_gamma)
            terms.append(ExpansionTerm("log", tilde, 0.0, log=True))

        return cls(regime, alpha, terms, delta, alpha > 0.5 - RESONANCE_TOL)

    def to_dict(self):

        return {
            "regime": self.regime.value,
            "alpha": self.alpha,
            "remainder_exponent": self.remainder_exponent,
            "constant": self.constant,
            "terms": [
                {
                    "name": term.name,
                    "coefficient": np.asarray(term.coefficient).tolist(),
                    "exponent": term.exponent,
                    "log": term.log,
                }
                for term in self.terms
            ],
        }

    @classmethod
    def from_dict(cls, data):

        terms = [
            ExpansionTerm(
                term["name"],
                np.asarray(term["coefficient"], dtype=float),
                term["exponent"],
                term.get("log", False),
            )
            for term in data["terms"]
        ]
        return cls(
            data["regime"],
            data["alpha"],
            terms,
            data["remainder_exponent"],
            data["constant"],
        )


class ExpansionResidual:
    """The remainder of a trajectory after subtracting expansion terms.

    Attributes
    ----------
    times : np.ndarray
    residual : np.ndarray
        The remainder at every sample, shape ``(K, N, d)``.
    norms : np.ndarray
        Its mass norm.
    fit : PowerLawFit or None
        ``None`` when the remainder is at noise level.
    fitted : dict
        The vector coefficients fitted over the last decade: ``"constant"``,
        the names of log terms and of the next unsubtracted term.
    conditioning : float
        The condition number of the least-squares design.
    rejected : bool
        Whether the fit is unusable: the remainder is at noise level, or the
        coefficient of determination is below ``MIN_R2``.
    coefficient_errors : dict
        For every fitted coefficient the expansion also computes (the log
        terms and the next unsubtracted term), the relative mass-norm error
        ``|fitted - computed| / |computed|``.
    """

    def __init__(
        self,
        times,
        residual,
        norms,
        fit,
        fitted,
        conditioning,
        coefficient_errors=None,
    ):

        self.times = times
        self.residual = residual
        self.norms = norms
        self.fit = fit
        self.fitted = fitted
        self.conditioning = conditioning
        self.rejected = fit is None or fit.r_squared < MIN_R2
        self.coefficient_errors = dict(coefficient_errors or {})

    def __repr__(self):

        return f"ExpansionResidual(fit={self.fit}, rejected={self.rejected})"

    def to_dict(self):

        return {
            "fit": None if self.fit is None else self.fit.to_dict(),
            "rejected": self.rejected,
            "conditioning": self.conditioning,
            "fitted": {
                name: np.asarray(value).tolist()
                for name, value in self.fitted.items()
            },
            "coefficient_errors": self.coefficient_errors,
        }


def expansion_residual(
    trajectory, spec, fit_constants=True, order=None, window=None
):
    """Subtract an expansion from a trajectory and fit what remains.

    Known power terms are subtracted as they are. The coefficients of log
    terms, the constant (when ``fit_constants`` and the expansion has one)
    and the coefficient of the first term left out by ``order`` are fitted
    jointly by least squares over the last decade of samples. Only the
    first two kinds are subtracted.

    Parameters
    ----------
    trajectory : Trajectory
    spec : ExpansionSpec
    fit_constants : bool
    order : int or None
        How many of the terms to subtract; all of them by default.
    window : tuple of float or None
        The power-law fitting window, ``[sqrt(T), T]`` by default.

    Returns
    -------
    ExpansionResidual
    """

    times, positions = trajectory.times, trajectory.positions
    system = trajectory.system
    terms = spec.terms if order is None else spec.terms[:order]
    following = None if order is None else spec.terms[order : order + 1]

    remainder = positions.copy()
    columns, names, computed = [], [], {}
    for term in terms:
        if term.log:
            columns.append(np.log(times))
            names.append(term.name)
            computed[term.name] = term.coefficient
        else:
            remainder -= term.evaluate(times)

    if fit_constants and spec.constant:
        columns.append(np.ones_like(times))
        names.append("constant")
    subtracted = len(columns)
    for term in following or []:
        scale = np.log(times) if term.log else times ** term.exponent
        columns.append(scale)
        names.append(term.name)
        computed[term.name] = term.coefficient

    fitted, conditioning = {}, 1.0
    if columns:
        last_decade = times >= times[-1] / 10
        design = np.column_stack(columns)
        conditioning = float(np.linalg.cond(design[last_decade]))
        if conditioning > CONDITION_LIMIT:
            warnings.warn(
                ConditioningWarning(
                    f"Expansion fit has condition number {conditioning:.3g}."
                )
            )

        flat = remainder.reshape(times.size, -1)
        solution, *_ = np.linalg.lstsq(
            design[last_decade], flat[last_decade], rcond=None
        )
        for name, row in zip(names, solution):
            fitted[name] = system.coords(row)
        for k in range(subtracted):
            remainder -= design[:, k, None, None] * fitted[names[k]]

    errors = {}
    for name, coefficient in computed.items():
        size = float(system.norm(coefficient))
        if size > 0:
            error = system.norm(fitted[name] - coefficient)
            errors[name] = float(error) / size

    norms = system.norm(remainder)
    scale = system.norm(positions)
    fit = None
    low, high = default_window(times) if window is None else window
    inside = (times >= low) & (times <= high)
    if np.all(norms[inside] > NOISE_FLOOR * scale[inside]):
        fit = fit_power_law(times, norms, (low, high))

    logger.debug("Expansion residual for %s: %s.", spec, fit)
    return ExpansionResidual(
        times, remainder, norms, fit, fitted, conditioning, errors
    )


class Classification:
    """The Chazy class of a trajectory and the evidence for it.

    Attributes
    ----------
    label : Regime
    pair_exponents : dict
        The fitted growth exponent of every ``|r_i - r_j|``.
    local_exponents : dict
        ``t |r_ij|' / |r_ij|`` at the last sample.
    velocity : np.ndarray
        The estimate ``x(T) / T`` of the asymptotic velocity.
    potential_exponent : float
        The fitted exponent of ``U`` along the trajectory.
    """

    def __init__(
        self, label, pair_exponents, local_exponents, velocity, potential_exponent
    ):

        self.label = label
        self.pair_exponents = pair_exponents
        self.local_exponents = local_exponents
        self.velocity = velocity
        self.potential_exponent = potential_exponent

    def __repr__(self):

        return f"Classification(label={self.label.value})"

    def to_dict(self):

        return {
            "label": self.label.value,
            "pair_exponents": {
                f"{i},{j}": value for (i, j), value in self.pair_exponents.items()
            },
            "velocity": self.velocity.tolist(),
            "potential_exponent": self.potential_exponent,
        }


def chazy_classify(trajectory, window=None, tolerance=CLASS_TOLERANCE):
    """Classify an expansive trajectory as hyperbolic, parabolic or
    hyperbolic-parabolic from the growth of its mutual distances.

    Every distance is fitted over the window. The label is ``H`` when all
    exponents are within ``tolerance`` of one, ``P`` when all are within
    ``tolerance`` of ``2 / (2 + alpha)`` and no pair grows faster than that
    at the end, and ``HP`` otherwise.

    Raises
    ------
    ClassificationError
        If the potential does not decay along the trajectory.
    """

    system = trajectory.system
    times = trajectory.times
    model = PotentialModel(trajectory.alpha, system)
    window = default_window(times) if window is None else window

    potential = model.energy(trajectory.positions)
    potential_fit = fit_power_law(times, potential, window)
    if potential_fit.exponent > -FIT_MARGIN:
        raise ClassificationError(
            reason="potential",
            exponent=potential_fit.exponent,
            message="The potential does not decay; the motion is not "
            "expansive.",
        )

    distances = system.distances(trajectory.positions)
    separations = system.separations(trajectory.positions[-1])
    rates = system.separations(trajectory.velocities[-1])
    local = times[-1] * np.einsum("pd,pd->p", separations, rates)
    local = local / distances[-1] ** 2

    pair_exponents, local_exponents = {}, {}
    for k, pair in enumerate(system.pairs):
        pair_exponents[pair] = fit_power_law(
            times, distances[:, k], window
        ).exponent
        local_exponents[pair] = float(local[k])

    exponents = np.array(list(pair_exponents.values()))
    parabolic = 2 / (2 + trajectory.alpha)
    hyperbolic_gap = np.abs(exponents - 1).max()
    parabolic_gap = np.abs(exponents - parabolic).max()
    parabolic_ok = parabolic_gap <= tolerance and local.max() <= (
        parabolic + tolerance
    )

    if hyperbolic_gap <= tolerance and not (
        parabolic_ok and parabolic_gap < hyperbolic_gap
    ):
        label = Regime.HYPERBOLIC
    elif parabolic_ok:
        label = Regime.PARABOLIC
    else:
        label = Regime.HYPERBOLIC_PARABOLIC

    velocity = trajectory.positions[-1] / times[-1]
    logger.info("Classified trajectory as %s.", label.value)
    return Classification(
        label, pair_exponents, local_exponents, velocity, potential_fit.exponent
    )


class SingularODESolution:
    """The solution data of ``y'' + mu y / t^2 = f``.

    Attributes
    ----------
    theta_minus, theta_plus : float
        The roots of ``theta^2 - theta + mu = 0``.
    times : np.ndarray
    particular, derivative : np.ndarray
        The particular solution from variation of constants and its
        derivative.
    anchors : tuple of str
        Where each of the two integrals starts: ``"end"`` (with a power-law
        tail beyond the samples) or ``"start"``.
    """

    def __init__(
        self, theta_minus, theta_plus, times, particular, derivative, anchors
    ):

        self.theta_minus = theta_minus
        self.theta_plus = theta_plus
        self.times = times
        self.particular = particular
        self.derivative = derivative
        self.anchors = anchors

    def homogeneous(self, t):
        """ The basis ``(t^theta_-, t^theta_+)`` of homogeneous solutions. """

        t = np.asarray(t, dtype=float)
        return t ** self.theta_minus, t ** self.theta_plus


def singular_exponents(mu):
    """Return ``theta_-`` and ``theta_+ = (1 +- sqrt(1 - 4 mu)) / 2``.

    Raises
    ------
    DomainError
        For ``mu >= 1/4``, where the roots are not distinct and real.
    """

    if mu >= 0.25:
        raise DomainError(mu=mu, message="Need mu < 1/4.")

    root = math.sqrt(1 - 4 * mu)
    return (1 - root) / 2, (1 + root) / 2


def _anchored_integral(times, integrand):
    """Integrate from the end of the samples (plus a power-law tail) when
    the integrand decays integrably, from the start otherwise."""

    cumulative = cumulative_trapezoid(integrand, times, axis=0, initial=0)
    sizes = _series_norms(integrand)
    if sizes[-1] > 0 and sizes[-2] > 0:
        decay = -math.log(sizes[-1] / sizes[-2]) / math.log(
            times[-1] / times[-2]
        )
    else:
        decay = math.inf

    if decay > 1:
        tail = 0.0 if math.isinf(decay) else times[-1] * integrand[-1] / (
            decay - 1
        )
        return cumulative - cumulative[-1] - tail, "end"
    return cumulative, "start"


def singular_ode_solution(mu, forcing, times):
    """Solve ``y'' + mu y / t^2 = f`` by variation of constants.

    With ``theta_-`` and ``theta_+`` the exponents of the homogeneous
    solutions, the particular solution is

        ``y_p = (t^theta_+ I_-(t) - t^theta_- I_+(t)) / (theta_+ - theta_-)``

    where ``I_pm(t)`` integrates ``s^theta_pm f(s)``.

    Parameters
    ----------
    mu : float
        Less than one quarter.
    forcing : array-like
        ``f`` at the sample times, with shape ``(K, ...)``.
    times : array-like
        Increasing sample times.

    Returns
    -------
    SingularODESolution
    """

    theta_minus, theta_plus = singular_exponents(mu)
    times = np.asarray(times, dtype=float)
    forcing = np.asarray(forcing, dtype=float)
    if forcing.shape[0] != times.size:
        raise DimensionError(times=times.shape, forcing=forcing.shape)

    shape = (-1,) + (1,) * (forcing.ndim - 1)
    t = times.reshape(shape)
    minus, anchor_minus = _anchored_integral(times, t ** theta_minus * forcing)
    plus, anchor_plus = _anchored_integral(times, t ** theta_plus * forcing)

    gap = theta_plus - theta_minus
    particular = (t ** theta_plus * minus - t ** theta_minus * plus) / gap
    derivative = (
        theta_plus * t ** (theta_plus - 1) * minus
        - theta_minus * t ** (theta_minus - 1) * plus
    ) / gap

    return SingularODESolution(
        theta_minus,
        theta_plus,
        times,
        particular,
        derivative,
        (anchor_minus, anchor_plus),
    )


def psi_b_exponents(alpha):
    """Return ``A = 2 alpha (1 + alpha) / (2 + alpha)^2`` and the roots
    ``m_pm = (1 +- sqrt(1 + 4A)) / 2`` of the equation for the projection
    of the remainder on ``b_m``."""

    coupling = 2 * alpha * (1 + alpha) / (2 + alpha) ** 2
    root = math.sqrt(1 + 4 * coupling)
    return coupling, (1 - root) / 2, (1 + root) / 2


def psi_b_bound(alpha):
    """The decay exponent bounding the ``b_m`` projection of the remainder
    of a parabolic motion."""

    forced = (2 * alpha - 2) / (2 + alpha)
    if alpha < 1:
        return max(psi_b_exponents(alpha)[1], forced)
    return forced


def b_projection(trajectory, central):
    """The series ``<x(t) - beta b_m t^(2/(2+alpha)), b_m>_M``."""

    system = trajectory.system
    b_m = central.b_m.coords
    exponent = 2 / (2 + trajectory.alpha)
    reference = central.beta * b_m * trajectory.times[:, None, None] ** exponent
    return system.inner(trajectory.positions - reference, b_m)


def b_projection_decay(trajectory, central, window=None, margin=FIT_MARGIN):
    """Fit the growth of the ``b_m`` projection of the remainder of a
    parabolic trajectory and check it against ``psi_b_bound``."""

    series = np.abs(b_projection(trajectory, central))
    fit = fit_power_law(trajectory.times, series, window)
    fit.check_bound(psi_b_bound(trajectory.alpha), margin)
    return fit


def cluster_center_drift(trajectory, partition):
    """Return, for every class of ``partition``, the norm of its barycenter
    minus ``a_K t``, with shape ``(classes, K)``."""

    system = trajectory.system
    drifts = []
    for members, velocity in zip(
        partition.classes, partition.representative_velocities
    ):
        members = list(members)
        masses = system.masses[members]
        centre = np.einsum(
            "kid,i->kd", trajectory.positions[:, members], masses
        ) / masses.sum()
        drifts.append(
            np.linalg.norm(centre - trajectory.times[:, None] * velocity, axis=1)
        )

    return np.array(drifts)


def expansion_check(trajectory, spec, margin=FIT_MARGIN):
    """Fit the remainder of a trajectory against the expansion of its
    regime and check the fitted exponent.

    Hyperbolic expansions with ``alpha > 1/2`` and no log terms are checked
    at their first correction: after subtracting ``a t`` and a fitted
    constant the remainder must grow like ``t^(1 - alpha)``. Every other
    expansion, including the hyperbolic one for ``alpha < 1/2``, is
    subtracted in full and checked against its remainder exponent
    ``1 - P alpha``.

    Returns
    -------
    ExpansionResidual
        With ``fit.bound`` and ``fit.passed`` set when a fit was made.
    """

    first_correction = (
        spec.regime is Regime.HYPERBOLIC
        and spec.alpha > 0.5
        and not any(term.log for term in spec.terms)
    )
    if first_correction:
        residual = expansion_residual(trajectory, spec, order=1)
        bound = 1 - spec.alpha
    else:
        residual = expansion_residual(trajectory, spec)
        bound = spec.remainder_exponent

    if residual.fit is not None:
        residual.fit.check_bound(bound, margin)
    return residual


class VerificationReport:
    """The outcome of a set of checks on one trajectory.

    Attributes
    ----------
    checks : list of dict
        Each with a ``name``, a ``pass`` flag, whether it is ``hard`` and
        the evidence.
    passed : bool
        Whether every hard check passed.
    """

    def __init__(self, checks):

        self.checks = checks
        self.passed = all(check["pass"] for check in checks if check["hard"])

    def __repr__(self):

        return f"VerificationReport(passed={self.passed})"

    def to_dict(self):

        return {"passed": self.passed, "checks": self.checks}


def verify_trajectory(
    trajectory, path=None, spec=None, expected=None, margin=FIT_MARGIN
):
    """Run the classification, expansion and projection checks.

    Parameters
    ----------
    trajectory : Trajectory
    path : BaseReferencePath or None
        The reference path the trajectory should shadow. It supplies the
        expected class, the expansion (unless ``spec`` is given) and, for
        parabolic motions, the central configuration.
    spec : ExpansionSpec or None
    expected : Regime or str or None
        The class the trajectory should fall into. Taken from ``path`` or
        ``spec`` when ``None``; without any of them the classification is
        reported but not checked.
    margin : float

    Returns
    -------
    VerificationReport

    Raises
    ------
    ClassificationError
        If the trajectory is not expansive.
    """

    from expansive.paths import defect

    if spec is None and path is not None:
        spec = ExpansionSpec.from_path(path)

    classification = chazy_classify(trajectory)
    if expected is not None:
        expected = Regime(expected)
    elif path is not None:
        expected = path.regime
    elif spec is not None:
        expected = spec.regime

    checks = [
        {
            "name": "classification",
            "hard": expected is not None,
            "pass": expected is None or classification.label is expected,
            "expected": None if expected is None else expected.value,
            **classification.to_dict(),
        }
    ]

    if spec is not None:
        residual = expansion_check(trajectory, spec, margin)
        fit = residual.fit
        checks.append(
            {
                "name": "expansion",
                "hard": True,
                "pass": True if fit is None else bool(fit.passed),
                **residual.to_dict(),
            }
        )

    central = getattr(path, "central", None)
    if central is not None:
        series = np.abs(b_projection(trajectory, central))
        scale = trajectory.system.norm(trajectory.positions)
        if np.any(series > NOISE_FLOOR * scale):
            fit = b_projection_decay(trajectory, central, margin=margin)
            checks.append(
                {
                    "name": "b_projection",
                    "hard": True,
                    "pass": bool(fit.passed),
                    **fit.to_dict(),
                }
            )

    if path is not None:
        model = path.model
        horizon = trajectory.times[-1]
        position = path.state(horizon)[0]
        force = trajectory.system.dual_norm(model.gradient(position))
        checks.append(
            {
                "name": "defect",
                "hard": False,
                "pass": True,
                "relative_defect": defect(model, path, horizon) / float(force),
            }
        )

    report = VerificationReport(checks)
    logger.info("Verification %s.", "passed" if report.passed else "failed")
    return report
