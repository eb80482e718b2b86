""" The discretised renormalised action, its derivatives and Hardy checks. """
import logging
from typing import NamedTuple

import numpy as np
from scipy.integrate import trapezoid

from expansive.base import Regime
from expansive.exceptions import DimensionError, DomainError

logger = logging.getLogger(__name__)

DEFAULT_NODES = 2000
DEFAULT_HORIZON = 1e4
TAIL_MODES = ("truncate", "analytic_tail")


class PerturbationGrid:
    """A piecewise-linear perturbation ``phi`` sampled on a mesh of
    ``[1, T]``.

    Parameters
    ----------
    nodes : array-like
        Strictly increasing times starting at one.
    values : array-like
        ``phi`` at every node, with shape ``(M + 1, N, d)`` or
        ``(M + 1, dN)``. The value at the first node must be zero.
    system : MassSystem
    mesh_kind : str
        Either ``"geometric"`` or ``"uniform"``; descriptive only.

    Attributes
    ----------
    steps : np.ndarray
        The ``M`` interval lengths.
    weights : np.ndarray
        The trapezoid weights of the nodes.
    """

    def __init__(self, nodes, values, system, mesh_kind="geometric"):

        nodes = np.asarray(nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise DimensionError(shape=nodes.shape, message="Need two nodes.")
        if nodes[0] != 1 or np.any(np.diff(nodes) <= 0):
            raise DomainError(
                message="Nodes must increase strictly from t = 1."
            )

        values = system.coords(values)
        if values.shape[0] != nodes.size:
            raise DimensionError(
                shape=values.shape,
                expected=(nodes.size, system.n_bodies, system.dim),
            )
        if np.any(values[0] != 0):
            raise DomainError(message="Perturbations vanish at t = 1.")

        self.nodes = nodes
        self.values = np.array(values, dtype=float)
        self.system = system
        self.mesh_kind = mesh_kind

        self.steps = np.diff(nodes)
        self.weights = np.zeros(nodes.size)
        self.weights[:-1] += self.steps / 2
        self.weights[1:] += self.steps / 2

    def __repr__(self):

        return (
            f"PerturbationGrid(mesh_kind={self.mesh_kind!r}, "
            f"intervals={self.n_intervals}, horizon={self.horizon})"
        )

    @classmethod
    def geometric(
        cls, system, horizon=DEFAULT_HORIZON, n_intervals=DEFAULT_NODES
    ):
        """The mesh ``t_i = T^(i / M)`` carrying ``phi = 0``."""

        nodes = horizon ** (np.arange(n_intervals + 1) / n_intervals)
        nodes[0], nodes[-1] = 1.0, horizon
        zeros = np.zeros((n_intervals + 1, system.n_bodies, system.dim))
        return cls(nodes, zeros, system, "geometric")

    @classmethod
    def uniform(cls, system, horizon=DEFAULT_HORIZON, n_intervals=DEFAULT_NODES):
        """ The evenly spaced mesh of ``[1, T]`` carrying ``phi = 0``. """

        nodes = np.linspace(1, horizon, n_intervals + 1)
        zeros = np.zeros((n_intervals + 1, system.n_bodies, system.dim))
        return cls(nodes, zeros, system, "uniform")

    @property
    def n_intervals(self):

        return self.nodes.size - 1

    @property
    def horizon(self):

        return self.nodes[-1]

    @property
    def free_values(self):
        """ The unknowns: every value but the pinned first one, flattened. """

        return self.values[1:].reshape(-1)

    def with_values(self, values):
        """Return a grid on the same nodes carrying ``values``. Passing only
        the ``M`` free values (in any shape) pins the first to zero."""

        system = self.system
        values = np.asarray(values, dtype=float)
        if values.size == self.n_intervals * system.size:
            free = values.reshape(self.n_intervals, system.n_bodies, system.dim)
            values = np.concatenate([np.zeros_like(free[:1]), free])

        return type(self)(self.nodes, values, system, self.mesh_kind)

    def velocities(self):
        """ The constant velocity of ``phi`` on each interval. """

        return np.diff(self.values, axis=0) / self.steps[:, None, None]

    def d_norm_squared(self):
        """ The squared norm ``int |phi'|_M^2`` of piecewise-linear ``phi``. """

        jumps = np.diff(self.values, axis=0)
        energies = self.system.inner(jumps, jumps)
        return float(np.sum(energies / self.steps))


class TailGroup(NamedTuple):
    """A set of pairs whose integrand decays at a common rate beyond the
    horizon: ``kappa0`` for the part independent of ``phi`` and ``kappa1``
    for the rest. ``work`` marks the group holding ``<M r_0'', phi>``."""

    mask: np.ndarray
    kappa0: float
    kappa1: float
    work: bool


class BandedHessian(NamedTuple):
    """The block-tridiagonal Hessian of the discrete action.

    ``diagonal`` has shape ``(M, dN, dN)``; ``off_diagonal`` has shape
    ``(M - 1, dN)`` and holds the diagonal coupling of consecutive nodes.
    """

    diagonal: np.ndarray
    off_diagonal: np.ndarray

    def to_banded(self):
        """ The upper banded storage used by ``scipy.linalg.solveh_banded``. """

        blocks, n = self.diagonal.shape[0], self.diagonal.shape[1]
        ab = np.zeros((n + 1, blocks * n))
        starts = np.arange(blocks)[:, None] * n
        for offset in range(n):
            rows, cols = np.arange(n - offset), np.arange(offset, n)
            ab[n - offset, (starts + cols).ravel()] = self.diagonal[
                :, rows, cols
            ].ravel()

        ab[0, n:] = self.off_diagonal.ravel()
        return ab

    def dense(self):

        blocks, n = self.diagonal.shape[0], self.diagonal.shape[1]
        matrix = np.zeros((blocks * n, blocks * n))
        for k in range(blocks):
            matrix[k * n : (k + 1) * n, k * n : (k + 1) * n] = self.diagonal[k]
        for k in range(blocks - 1):
            coupling = np.diag(self.off_diagonal[k])
            matrix[k * n : (k + 1) * n, (k + 1) * n : (k + 2) * n] = coupling
            matrix[(k + 1) * n : (k + 2) * n, k * n : (k + 1) * n] = coupling

        return matrix


class HardyCheck(NamedTuple):
    """ Both sides of the discrete Hardy inequality and the sup bound. """

    lhs: float
    rhs: float
    ratio: float
    sup_lhs: float
    sup_rhs: float

    @property
    def holds(self):

        return self.lhs <= self.rhs and self.sup_lhs <= self.sup_rhs


class ActionProblem:
    """The minimisation problem for a motion starting at ``x0`` and
    shadowing ``path``: the curve is ``r_0(t) + phi(t) + x0 - r_0(1)``.

    Parameters
    ----------
    model : PotentialModel
    path : BaseReferencePath
    x0 : Configuration
        The initial configuration.
    renormalized : bool or None
        Whether to subtract ``U(r_0)`` from the integrand. Only hyperbolic
        problems with ``alpha > 1`` may switch it off; ``None`` picks the
        plain action exactly there.
    horizon : float
        The horizon ``T`` of default grids.
    tail_mode : str
        ``"truncate"`` drops the integral beyond the last node;
        ``"analytic_tail"`` adds its leading-order estimate with ``phi``
        frozen at ``phi(T)``.

    Attributes
    ----------
    shift : np.ndarray
        The constant ``x0 - r_0(1)``.
    groups : list of TailGroup
    """

    def __init__(
        self,
        model,
        path,
        x0,
        renormalized=None,
        horizon=DEFAULT_HORIZON,
        tail_mode="truncate",
    ):

        if x0.system != model.system or path.system != model.system:
            raise DomainError(message="Inputs belong to different systems.")
        if tail_mode not in TAIL_MODES:
            raise DomainError(tail_mode=tail_mode, allowed=TAIL_MODES)
        if not horizon > 1:
            raise DomainError(horizon=horizon, message="Need T > 1.")

        plain_allowed = path.regime is Regime.HYPERBOLIC and model.alpha > 1
        if renormalized is None:
            renormalized = not plain_allowed
        if not renormalized and not plain_allowed:
            raise DomainError(
                alpha=model.alpha,
                regime=path.regime,
                message="The plain action is finite only for hyperbolic "
                "motions with alpha > 1.",
            )

        self.model = model
        self.system = model.system
        self.path = path
        self.x0 = x0
        self.renormalized = bool(renormalized)
        self.horizon = float(horizon)
        self.tail_mode = tail_mode

        self.shift = x0.coords - path.state(1.0)[0]
        self.intra = self._intra_mask()
        self.groups = self._tail_groups()
        self._cached_nodes = None
        self._cached_reference = None

    def __repr__(self):

        return (
            f"ActionProblem(regime={self.path.regime.value}, "
            f"alpha={self.model.alpha}, renormalized={self.renormalized}, "
            f"tail_mode={self.tail_mode!r})"
        )

    def _intra_mask(self):

        n_pairs = len(self.system.pairs)
        regime = self.path.regime
        if regime is Regime.PARABOLIC:
            return np.ones(n_pairs, dtype=bool)
        if regime is Regime.HYPERBOLIC:
            return np.zeros(n_pairs, dtype=bool)
        return self.path.partition.pair_mask()

    def _tail_groups(self):

        alpha = self.model.alpha
        if self.path.regime is Regime.HYPERBOLIC:
            kappa0 = 1 + alpha if self.renormalized else alpha
            every = np.ones(len(self.system.pairs), dtype=bool)
            return [TailGroup(every, kappa0, 1 + alpha, True)]

        parabolic = TailGroup(self.intra, (2 + 2 * alpha) / (2 + alpha), 2, True)
        if self.path.regime is Regime.PARABOLIC:
            return [parabolic]
        return [parabolic, TailGroup(~self.intra, 1 + alpha, 1 + alpha, False)]

    def grid(self, n_intervals=DEFAULT_NODES, mesh_kind="geometric"):
        """ A zero perturbation on a fresh mesh of ``[1, horizon]``. """

        maker = getattr(PerturbationGrid, mesh_kind)
        return maker(self.system, self.horizon, n_intervals)

    def reference(self, nodes):
        """Return the position and acceleration of the reference path at
        ``nodes``, each of shape ``(K, N, d)``. The last call is cached."""

        if self._cached_nodes is None or not np.array_equal(
            nodes, self._cached_nodes
        ):
            position, _, acceleration = self.path.state(nodes)
            self._cached_nodes = np.array(nodes)
            self._cached_reference = (position, acceleration)

        return self._cached_reference

    def renormalizer(self, nodes, clustered=False):
        """The per-pair terms subtracted from ``U`` at every node, shape
        ``(K, P)``. The clustered variant replaces the inter-cluster terms of
        ``U(r_0)`` by ``m_i m_j |a_ij t|^(-alpha)``."""

        position, _ = self.reference(nodes)
        n_pairs = len(self.system.pairs)
        if not self.renormalized:
            return np.zeros((len(nodes), n_pairs))

        terms = self.model.pair_energies(position)
        if clustered:
            inter = ~self.intra
            separations = self.system.separations(self.path.a.coords)[inter]
            speeds = np.linalg.norm(separations, axis=-1)
            terms[:, inter] = self.model.weights[inter] * (
                np.asarray(nodes)[:, None] * speeds
            ) ** (-self.model.alpha)

        return terms

    def curve(self, grid):
        """ The curve ``r_0 + phi + x0 - r_0(1)`` at the nodes of ``grid``. """

        position, _ = self.reference(grid.nodes)
        return position + grid.values + self.shift

    def _terms(self, grid, clustered=False):

        _, acceleration = self.reference(grid.nodes)
        curve = self.curve(grid)
        pairs = self.model.pair_energies(curve) - self.renormalizer(
            grid.nodes, clustered
        )
        work = np.einsum(
            "kid,kid,i->k", acceleration, grid.values, self.system.masses
        )
        return curve, pairs, work

    def _tail(self, grid, pairs, work, clustered=False):

        if self.tail_mode == "truncate":
            return 0.0

        horizon = grid.horizon
        position, _ = self.reference(grid.nodes)
        frozen = self.model.pair_energies(position[-1] + self.shift)
        frozen = frozen - self.renormalizer(grid.nodes, clustered)[-1]

        total = 0.0
        for group in self.groups:
            current = pairs[-1] @ group.mask - (work[-1] if group.work else 0)
            initial = frozen @ group.mask
            kappa0 = group.kappa0
            if clustered and not group.work:
                kappa0 = group.kappa0 - 2 / (2 + self.model.alpha)
            if kappa0 > 1:
                total += horizon / (kappa0 - 1) * initial
            else:
                logger.debug(
                    "Tail of the phi-independent term decays like "
                    "t^(-%.4g) and diverges; dropped from the action.",
                    kappa0,
                )
            total += horizon / (group.kappa1 - 1) * (current - initial)

        return total

    def action(self, grid, clustered=False):
        """ The discrete action of ``grid``; see ``renormalized_action``. """

        self._check_grid(grid)
        _, pairs, work = self._terms(grid, clustered)
        integrand = pairs.sum(axis=-1) - work

        kinetic = 0.5 * grid.d_norm_squared()
        potential = grid.weights @ integrand
        return float(
            kinetic + potential + self._tail(grid, pairs, work, clustered)
        )

    def gradient(self, grid):
        """ The gradient with respect to the free nodal values, ``(M, dN)``. """

        self._check_grid(grid)
        masses = self.system.masses[:, None]
        _, acceleration = self.reference(grid.nodes)
        curve = self.curve(grid)

        slopes = masses * grid.velocities()
        kinetic = slopes.copy()
        kinetic[:-1] -= slopes[1:]

        forces = self.model.gradient(curve[1:]) - masses * acceleration[1:]
        gradient = kinetic + grid.weights[1:, None, None] * forces

        if self.tail_mode == "analytic_tail":
            for group in self.groups:
                term = self.model.gradient(curve[-1], group.mask)
                if group.work:
                    term = term - masses * acceleration[-1]
                gradient[-1] += grid.horizon / (group.kappa1 - 1) * term

        return gradient.reshape(grid.n_intervals, self.system.size)

    def hessian(self, grid):
        """ The exact Hessian of the discrete action as a ``BandedHessian``. """

        self._check_grid(grid)
        curve = self.curve(grid)
        mass_vector = self.system.mass_vector

        inverse_steps = 1 / grid.steps
        stiffness = inverse_steps.copy()
        stiffness[:-1] += inverse_steps[1:]

        diagonal = grid.weights[1:, None, None] * self.model.hessian(curve[1:])
        diagonal += stiffness[:, None, None] * np.diag(mass_vector)
        if self.tail_mode == "analytic_tail":
            for group in self.groups:
                diagonal[-1] += (
                    grid.horizon
                    / (group.kappa1 - 1)
                    * self.model.hessian(curve[-1], group.mask)
                )

        off_diagonal = -inverse_steps[1:, None] * mass_vector
        return BandedHessian(diagonal, off_diagonal)

    def _check_grid(self, grid):

        if grid.system != self.system:
            raise DomainError(message="Grid belongs to a different system.")


def renormalized_action(problem, grid):
    """Evaluate the discrete action of a perturbation.

    The kinetic term ``1/2 |phi'|_M^2`` is integrated exactly on each
    interval; the potential part, ``U(r_0 + phi + x - r_0(1)) - U(r_0) -
    <M r_0'', phi>`` (without ``U(r_0)`` for the plain action), uses the
    trapezoid rule on the nodes.

    Parameters
    ----------
    problem : ActionProblem
    grid : PerturbationGrid

    Returns
    -------
    float

    Raises
    ------
    SingularityError
        If the curve collides at a node; the error carries the node.
    """

    return problem.action(grid)


def clustered_action(problem, grid):
    """The hyperbolic-parabolic action split into intra- and inter-cluster
    pair terms. Inter-cluster pairs are renormalised by
    ``m_i m_j |a_ij t|^(-alpha)``, which changes the action by a constant
    independent of ``phi``."""

    if problem.path.regime is not Regime.HYPERBOLIC_PARABOLIC:
        raise DomainError(
            regime=problem.path.regime,
            message="The clustered action needs a hyperbolic-parabolic path.",
        )

    return problem.action(grid, clustered=True)


def action_gradient(problem, grid):
    """ The exact gradient of the discrete action over nodes ``1, ..., M``. """

    return problem.gradient(grid)


def action_hessian(problem, grid):

    return problem.hessian(grid)


def hardy_check(grid, eps=0.0):
    """Evaluate both sides of the Hardy-type inequality

        ``int |phi|_M^2 / t^(2 + eps) <= 4 / (1 + eps)^2 int |phi'|_M^2``

    for the piecewise-linear ``phi`` of ``grid``, continued as a constant
    beyond the horizon, together with ``sup |phi|_M^2 / (t - 1)``, which is
    bounded by ``int |phi'|_M^2``.

    Parameters
    ----------
    grid : PerturbationGrid
    eps : float
        A non-negative weight exponent.

    Returns
    -------
    HardyCheck
        The ratio is zero when both sides are.
    """

    if eps < 0:
        raise DomainError(eps=eps, message="eps must be non-negative.")

    nodes = grid.nodes
    squares = grid.system.inner(grid.values, grid.values)
    lhs = trapezoid(squares / nodes ** (2 + eps), nodes)
    lhs += squares[-1] * grid.horizon ** (-1 - eps) / (1 + eps)

    d_norm = grid.d_norm_squared()
    rhs = 4 / (1 + eps) ** 2 * d_norm
    ratio = lhs / rhs if rhs > 0 else 0.0
    sup_lhs = np.max(squares[1:] / (nodes[1:] - 1))

    return HardyCheck(
        float(lhs), float(rhs), float(ratio), float(sup_lhs), d_norm
    )
