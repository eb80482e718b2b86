""" Minimal central configurations, the homothetic scale and a-clusters. """
import logging
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.optimize import minimize

from expansive.exceptions import (
    ConvergenceError,
    DomainError,
    ExpansiveError,
    SingularityError,
)
from expansive.potential import PotentialModel
from expansive.system import Configuration

DEFAULT_STARTS = 16
TOL_CC = 1e-10
MAX_ITERS = 500
POLISH_ITERS = 50

logger = logging.getLogger(__name__)


class CentralConfiguration:
    """A normalised central configuration together with its homothetic
    scale.

    Parameters
    ----------
    model : PotentialModel
        The potential the configuration is critical for.
    b_m : Configuration
        The barycentred configuration with unit mass norm.
    u_min : float
        The potential at ``b_m``.
    converged : bool
        Whether the Lagrange residual met the requested tolerance.
    gradient_residual : float
        The residual ``|grad U(b) + alpha U(b) M b|`` in the dual norm.
    start : int or None
        The multi-start index that produced the configuration.

    Attributes
    ----------
    beta : float
        The homothetic scale ``((2 + alpha)^2 / 2 * u_min)^(1 / (2 + alpha))``
        or ``nan`` when ``alpha`` is outside ``(0, 2)``.
    """

    def __init__(
        self, model, b_m, u_min, converged, gradient_residual, start=None
    ):

        self.model = model
        self.alpha = model.alpha
        self.b_m = b_m
        self.u_min = float(u_min)
        self.converged = bool(converged)
        self.gradient_residual = float(gradient_residual)
        self.start = start

        self.beta = (
            beta_coefficient(self.u_min, self.alpha)
            if 0 < self.alpha < 2
            else float("nan")
        )

    def __repr__(self):

        return (
            f"CentralConfiguration(u_min={self.u_min}, beta={self.beta}, "
            f"converged={self.converged})"
        )

    def homothetic_path(self):
        """ Return the homothetic parabolic reference path of ``b_m``. """

        from expansive.paths import ParabolicPath

        return ParabolicPath(self.model, self)

    def to_dict(self):

        data = self.b_m.to_dict(key="b_m")
        data.update(
            {
                "alpha": self.alpha,
                "u_min": self.u_min,
                "beta": None if math.isnan(self.beta) else self.beta,
                "converged": self.converged,
                "gradient_residual": self.gradient_residual,
            }
        )
        return data

    @classmethod
    def from_dict(cls, data):

        b_m = Configuration.from_dict(data, key="b_m")
        model = PotentialModel(data["alpha"], b_m.system)
        return cls(
            model,
            b_m,
            data["u_min"],
            data.get("converged", True),
            data.get("gradient_residual", lagrange_residual(model, b_m)),
        )


def beta_coefficient(u_min, alpha):
    """Compute the scale of the homothetic solution ``beta b t^(2/(2+alpha))``.

    Parameters
    ----------
    u_min : float
        The potential at the normalised central configuration.
    alpha : float
        The homogeneity exponent, in ``(0, 2)``.

    Returns
    -------
    float
        ``((2 + alpha)^2 / 2 * u_min)^(1 / (2 + alpha))``.
    """

    if not u_min > 0:
        raise DomainError(u_min=u_min, message="u_min must be positive.")
    if not 0 < alpha < 2:
        raise DomainError(alpha=alpha, message="alpha must lie in (0, 2).")

    return ((2 + alpha) ** 2 / 2 * u_min) ** (1 / (2 + alpha))


def lagrange_residual(model, b):
    """ The dual norm of ``grad U(b) + alpha U(b) M b``. """

    system = model.system
    b = system.coords(b)
    residual = model.gradient(b) + model.alpha * model.energy(b) * (
        system.masses[:, None] * b
    )
    return float(system.dual_norm(residual))


def _normalise(system, x):

    x = system.project(x)
    return x / system.norm(x)


def _scaled_potential(flat, model):
    """The scale-invariant potential ``U(x) |x|_M^alpha`` and its gradient,
    for use with ``scipy.optimize.minimize``."""

    system = model.system
    x = system.coords(flat)
    norm = system.norm(x)
    energy = model.energy(x)

    value = energy * norm ** model.alpha
    grad = model.gradient(x) * norm ** model.alpha + (
        model.alpha
        * energy
        * norm ** (model.alpha - 2)
        * system.masses[:, None]
        * x
    )
    return value, grad.reshape(-1)


def _polish(model, b, tol_cc, iterations=POLISH_ITERS):
    """Refine a near-critical point with Newton steps on the Lagrange system
    ``grad U(b) = lam M b, |b|_M = 1``. The rotational null space is handled
    by taking minimum-norm least-squares steps."""

    system = model.system
    mass = system.mass_vector
    size = system.size

    residual = lagrange_residual(model, b)
    for _ in range(iterations):
        if residual <= tol_cc / 10:
            break

        flat = b.reshape(-1)
        lam = -model.alpha * model.energy(b)
        jacobian = np.zeros((size + 1, size + 1))
        jacobian[:size, :size] = model.hessian(b) - lam * np.diag(mass)
        jacobian[:size, size] = -mass * flat
        jacobian[size, :size] = mass * flat

        rhs = np.append(
            model.gradient(b).reshape(-1) - lam * mass * flat,
            0.5 * (flat @ (mass * flat) - 1),
        )
        step = np.linalg.lstsq(jacobian, -rhs, rcond=None)[0]
        trial = _normalise(system, flat[:size] + step[:size])
        trial_residual = lagrange_residual(model, trial)
        if not trial_residual < residual:
            break

        b, residual = trial, trial_residual

    return b, residual


def _canonical_orientation(system, b):
    """Reflect ``b`` so that the first body away from the origin lies on the
    positive first axis."""

    lengths = np.linalg.norm(b, axis=1)
    k = int(np.argmax(lengths > 1e-12 * lengths.max()))
    unit = b[k] / lengths[k]

    target = np.zeros(system.dim)
    target[0] = 1
    v = unit - target
    if np.linalg.norm(v) < 1e-15:
        return b

    reflection = np.eye(system.dim) - 2 * np.outer(v, v) / (v @ v)
    return b @ reflection


def _run_start(model, seed, start, max_iters, tol_cc):
    """Run one deterministic start keyed by ``(seed, start)``. Return
    ``None`` if the iterate degenerates into a collision."""

    system = model.system
    rng = np.random.default_rng([seed, start])
    x0 = _normalise(system, rng.standard_normal((system.n_bodies, system.dim)))

    try:
        result = minimize(
            _scaled_potential,
            x0.reshape(-1),
            args=(model,),
            jac=True,
            method="L-BFGS-B",
            options={"maxiter": max_iters, "gtol": 1e-13, "ftol": 1e-16},
        )
        b = _normalise(system, result.x)
        b, residual = _polish(model, b, tol_cc)
    except SingularityError:
        logger.debug("Start %d degenerated into a collision.", start)
        return None

    return b, float(model.energy(b)), residual


def find_central_configuration(
    model,
    seed=0,
    tol_cc=TOL_CC,
    starts=DEFAULT_STARTS,
    max_iters=MAX_ITERS,
    workers=1,
):
    """Find a minimal normalised central configuration by multi-start
    minimisation of ``U`` on the inertia ellipsoid.

    Each start draws a random barycentred configuration, minimises the
    scale-invariant ``U(x) |x|_M^alpha`` with L-BFGS-B and polishes the
    result with Newton steps on the Lagrange condition. The start with the
    smallest potential among those meeting ``tol_cc`` is returned in a
    canonical orientation.

    Parameters
    ----------
    model : PotentialModel
        The potential and mass system.
    seed : int
        Seed for the random starts. Results are deterministic in ``seed``.
    tol_cc : float
        Tolerance on the Lagrange residual.
    starts : int
        The number of random starts.
    max_iters : int
        Iteration cap for each L-BFGS-B run.
    workers : int
        The number of threads used to run the starts.

    Returns
    -------
    CentralConfiguration
        The best configuration found.

    Raises
    ------
    ConvergenceError
        If no start meets ``tol_cc``. The best iterate is attached as
        ``best``.
    """

    system = model.system
    if starts < 1:
        raise DomainError(starts=starts, message="At least one start.")

    def run(start):
        return _run_start(model, seed, start, max_iters, tol_cc)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(run, range(starts)))
    else:
        results = [run(start) for start in range(starts)]

    best, best_any = None, None
    for start, result in enumerate(results):
        if result is None:
            continue

        b, energy, residual = result
        if best_any is None or energy < best_any[1] - 1e-12 * abs(energy):
            best_any = (b, energy, residual, start)
        if residual <= tol_cc and (
            best is None or energy < best[1] - 1e-12 * abs(energy)
        ):
            best = (b, energy, residual, start)

    if best_any is None:
        raise ConvergenceError(
            best=None,
            residual=float("inf"),
            message="Every start degenerated into a collision.",
        )

    converged = best is not None
    b, energy, residual, start = best if converged else best_any
    b = _canonical_orientation(system, b)
    central = CentralConfiguration(
        model, Configuration(b, system), energy, converged, residual, start
    )
    logger.info(
        "Central configuration: u_min=%.12g residual=%.3g start=%d",
        energy,
        residual,
        start,
    )

    if not converged:
        raise ConvergenceError(
            best=central,
            residual=residual,
            message=f"No start reached the tolerance {tol_cc}.",
        )

    return central


class ClusterPartition:
    """The partition of the bodies into classes sharing an asymptotic
    velocity.

    Parameters
    ----------
    classes : list of tuple of int
        The (zero-based) body indices of each class, in order of first
        appearance.
    a : Configuration
        The asymptotic velocities.

    Attributes
    ----------
    cluster_masses : np.ndarray
        The total mass of each class.
    representative_velocities : np.ndarray
        The mass-weighted mean velocity of each class.
    labels : np.ndarray
        The class index of every body.
    """

    def __init__(self, classes, a):

        system = a.system
        self.classes = [tuple(sorted(k)) for k in classes]
        self.a = a
        self.system = system

        self.labels = np.empty(system.n_bodies, dtype=int)
        for label, members in enumerate(self.classes):
            self.labels[list(members)] = label

        self.cluster_masses = np.array(
            [system.masses[list(k)].sum() for k in self.classes]
        )
        self.representative_velocities = np.array(
            [
                system.masses[list(k)] @ a.coords[list(k)] / mass
                for k, mass in zip(self.classes, self.cluster_masses)
            ]
        )

    def __repr__(self):

        return f"ClusterPartition({[list(k) for k in self.classes]})"

    def __len__(self):

        return len(self.classes)

    @property
    def is_trivial(self):
        """ Whether every class is a singleton. """

        return all(len(k) == 1 for k in self.classes)

    def pair_mask(self):
        """ A boolean mask over ``system.pairs``: ``True`` for intra-cluster. """

        return np.array(
            [self.labels[i] == self.labels[j] for i, j in self.system.pairs]
        )


def cluster_partition(a, eps_cluster=None):
    """Group the bodies whose asymptotic velocities agree.

    Two bodies are related when their velocities are within ``eps_cluster``;
    the classes are the transitive closure of this relation.

    Parameters
    ----------
    a : Configuration
        The asymptotic velocities.
    eps_cluster : float or None
        Proximity threshold. Defaults to ``1e-8 * max_i |a_i|``.

    Returns
    -------
    ClusterPartition
    """

    coords = a.coords
    if eps_cluster is None:
        eps_cluster = 1e-8 * np.linalg.norm(coords, axis=1).max()

    n = a.system.n_bodies
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in a.system.pairs:
        if np.linalg.norm(coords[i] - coords[j]) <= eps_cluster:
            parent[find(j)] = find(i)

    classes = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)

    return ClusterPartition(list(classes.values()), a)


class ClusteredCentralConfiguration:
    """Per-cluster central configurations assembled into one block vector.

    Attributes
    ----------
    partition : ClusterPartition
    blocks : list of (CentralConfiguration or None, float)
        One entry per class: the class central configuration and its scale,
        or ``(None, 0.0)`` for a singleton.
    b_m : np.ndarray
        The block vector of shape ``(N, d)``, zero on singletons.
    betas : np.ndarray
        The scale of each body's class.
    shape : np.ndarray
        ``betas[:, None] * b_m``, the coefficient of ``t^(2/(2+alpha))``.
    """

    def __init__(self, model, partition, blocks):

        self.model = model
        self.alpha = model.alpha
        self.partition = partition
        self.blocks = blocks

        system = model.system
        self.b_m = np.zeros((system.n_bodies, system.dim))
        self.betas = np.zeros(system.n_bodies)
        for members, (central, beta) in zip(partition.classes, blocks):
            if central is not None:
                self.b_m[list(members)] = central.b_m.coords
                self.betas[list(members)] = beta

        self.shape = self.betas[:, None] * self.b_m


def clustered_central_configuration(model, partition, **kwargs):
    """Find a central configuration for every non-singleton cluster, each on
    its own subsystem with the internal potential of the cluster.

    Parameters
    ----------
    model : PotentialModel
        The potential of the whole system.
    partition : ClusterPartition
        The cluster partition of the asymptotic velocities.
    **kwargs
        Passed on to ``find_central_configuration``.

    Returns
    -------
    ClusteredCentralConfiguration
    """

    blocks = []
    for label, members in enumerate(partition.classes):
        if len(members) == 1:
            blocks.append((None, 0.0))
            continue

        sub_model = PotentialModel(
            model.alpha, model.system.subsystem(members), model.q_max
        )
        try:
            central = find_central_configuration(sub_model, **kwargs)
        except ExpansiveError as error:
            raise type(error)(cluster=members, **error.message) from error

        blocks.append((central, central.beta))

    return ClusteredCentralConfiguration(model, partition, blocks)
