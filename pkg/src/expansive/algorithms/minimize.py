""" Minimisation of the discrete action and reconstruction of the motion. """
import logging

import numpy as np
from scipy.linalg import LinAlgError, solveh_banded

from expansive.algorithms.integrate import differentiate, euler_lagrange_residual
from expansive.exceptions import CollisionGuardError
from expansive.trajectory import Provenance, Trajectory, total_energies

logger = logging.getLogger(__name__)

OPT_TOL = 1e-8
MAX_ITERS = 100
GUARD_FACTOR = 10
MAX_BACKTRACKS = 40
ARMIJO = 1e-4


class SynthesisReport:
    """The outcome of an action minimisation.

    Attributes
    ----------
    trajectory : Trajectory
        The motion reconstructed on the grid nodes.
    grid : PerturbationGrid
        The final perturbation.
    initial_grid : PerturbationGrid
        The initial guess, so that distinct basins can be told apart.
    initial_action, final_action : float
    iterations : int
        The number of Newton steps taken.
    gradient_norm : float
        The max-norm of the final gradient.
    el_residual : float
        The Euler-Lagrange residual of ``trajectory``.
    hit_collision_guard : bool
        Whether any trial step was rejected by the collision guard.
    converged : bool
        Whether ``gradient_norm <= opt_tol``.
    """

    def __init__(
        self,
        trajectory,
        grid,
        initial_grid,
        initial_action,
        final_action,
        iterations,
        gradient_norm,
        el_residual,
        hit_collision_guard,
        converged,
    ):

        self.trajectory = trajectory
        self.grid = grid
        self.initial_grid = initial_grid
        self.initial_action = initial_action
        self.final_action = final_action
        self.iterations = iterations
        self.gradient_norm = gradient_norm
        self.el_residual = el_residual
        self.hit_collision_guard = hit_collision_guard
        self.converged = converged

    def __repr__(self):

        return (
            f"SynthesisReport(converged={self.converged}, "
            f"iterations={self.iterations}, "
            f"final_action={self.final_action:.10g})"
        )

    @property
    def energy(self):
        """ The energy of the motion at the horizon. """

        return self.trajectory.energy

    def to_dict(self):

        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "initial_action": self.initial_action,
            "final_action": self.final_action,
            "gradient_norm": self.gradient_norm,
            "el_residual": self.el_residual,
            "hit_collision_guard": self.hit_collision_guard,
            "energy": self.energy,
            "horizon": float(self.grid.horizon),
            "nodes": int(self.grid.nodes.size),
            "initial_guess_norm": self.initial_grid.d_norm_squared() ** 0.5,
        }


def newton_direction(hessian, gradient):
    """Solve ``H p = -g`` with the banded Cholesky factorisation, shifting
    ``H`` by a multiple of its mass diagonal until it is positive definite."""

    banded = hessian.to_banded()
    scale = np.abs(banded[-1]).max()
    shift = 0.0
    while True:
        shifted = banded.copy()
        shifted[-1] += shift * scale
        try:
            return solveh_banded(shifted, -gradient.ravel(), check_finite=False)
        except LinAlgError:
            shift = 1e-8 if shift == 0 else 10 * shift
            logger.debug("Hessian not positive definite; shift %.1e.", shift)


def violates_guard(problem, grid, factor=GUARD_FACTOR):
    """Whether the curve of ``grid`` comes closer to collision than ``factor``
    times the collision threshold at some node."""

    system = problem.system
    distances = system.distances(problem.curve(grid))
    threshold = factor * system.eps_collision * distances.max(axis=-1)
    return bool(np.any(distances.min(axis=-1) < threshold))


def reconstruct(problem, grid):
    """Return the trajectory ``r_0 + phi + x0 - r_0(1)`` on the nodes of
    ``grid``, with velocities ``r_0' + phi'`` from five-point stencils."""

    _, velocity, _ = problem.path.state(grid.nodes)
    positions = problem.curve(grid)
    velocities = velocity + differentiate(grid.nodes, grid.values)

    trajectory = Trajectory(
        grid.nodes,
        positions,
        velocities,
        problem.system,
        problem.model.alpha,
        Provenance.MINIMIZED,
        metadata={
            "regime": problem.path.regime.value,
            "tail_mode": problem.tail_mode,
            "renormalized": problem.renormalized,
        },
    )
    trajectory.energy = float(
        total_energies(problem.model, positions[-1], velocities[-1])
    )
    if problem.path.a is not None:
        trajectory.metadata["a"] = problem.path.a.coords.tolist()
    central = getattr(problem.path, "central", None)
    if central is not None:
        trajectory.metadata["central"] = central.to_dict()
    return trajectory


def initial_guess(problem, grid=None, guard_factor=GUARD_FACTOR):
    """Return the zero perturbation when its curve, the shifted reference,
    clears the collision guard. Otherwise, with ``t*`` twice the last
    offending node, the curve on ``[1, t*]`` is replaced by the straight
    line from ``x0`` to its value at ``t*``.

    Raises
    ------
    CollisionGuardError
        If the straight line also comes too close to a collision.
    """

    grid = problem.grid() if grid is None else grid
    system = problem.system
    distances = system.distances(problem.curve(grid))
    threshold = guard_factor * system.eps_collision * distances.max(axis=-1)
    offending = np.flatnonzero(distances.min(axis=-1) < threshold)
    if offending.size == 0:
        return grid

    nodes = grid.nodes
    last = min(
        int(np.searchsorted(nodes, 2 * nodes[offending[-1]])), nodes.size - 1
    )
    position, _ = problem.reference(nodes)
    start = problem.x0.coords
    end = position[last] + problem.shift

    s = ((nodes[: last + 1] - 1) / (nodes[last] - 1))[:, None, None]
    values = np.zeros_like(grid.values)
    values[: last + 1] = (1 - s) * start + s * end - position[: last + 1]
    values[: last + 1] -= problem.shift
    values[0] = 0

    guess = grid.with_values(values)
    if violates_guard(problem, guess, guard_factor):
        raise CollisionGuardError(
            last_iterate=guess,
            message="Neither the shifted reference nor its straight-line "
            "replacement clears the collision guard.",
        )

    logger.info("Replaced the initial guess on [1, %g].", nodes[last])
    return guess


def minimize_action(
    problem,
    init=None,
    opt_tol=OPT_TOL,
    max_iters=MAX_ITERS,
    guard_factor=GUARD_FACTOR,
):
    """Minimise the discrete action by damped Newton steps.

    Each step solves the block-tridiagonal Newton system, then backtracks
    until the Armijo condition holds. Trial perturbations whose curve comes
    within ``guard_factor`` collision thresholds of a collision are rejected.
    Accepted iterates never increase the action.

    Parameters
    ----------
    problem : ActionProblem
    init : PerturbationGrid or None
        The initial guess; ``initial_guess(problem)`` when ``None``.
    opt_tol : float
        Stop once the max-norm of the gradient is at most this.
    max_iters : int
        The largest number of Newton steps.
    guard_factor : float

    Returns
    -------
    SynthesisReport
        Flagged non-converged when ``max_iters`` is reached or the line
        search stalls.

    Raises
    ------
    CollisionGuardError
        If every trial of a line search is rejected by the guard. The error
        carries the ``last_iterate``.
    """

    grid = initial_guess(problem) if init is None else init
    initial_grid = grid
    value = initial_action = problem.action(grid)
    hit_guard = False

    iteration = 0
    while True:
        gradient = problem.gradient(grid)
        gradient_norm = float(np.abs(gradient).max())
        logger.debug(
            "Iteration %d: action %.12g, gradient %.3e.",
            iteration,
            value,
            gradient_norm,
        )
        if gradient_norm <= opt_tol or iteration >= max_iters:
            break

        direction = newton_direction(problem.hessian(grid), gradient)
        slope = float(gradient.ravel() @ direction)
        negligible = -slope <= 1e-13 * (1 + abs(value))

        size, guarded, accepted = 1.0, 0, False
        for _ in range(MAX_BACKTRACKS):
            trial = grid.with_values(grid.free_values + size * direction)
            if violates_guard(problem, trial, guard_factor):
                guarded += 1
                size /= 2
                continue

            trial_value = problem.action(trial)
            if trial_value <= value + ARMIJO * size * slope or (
                negligible and trial_value <= value
            ):
                accepted = True
                break
            size /= 2

        hit_guard = hit_guard or guarded > 0
        if not accepted:
            if guarded == MAX_BACKTRACKS:
                raise CollisionGuardError(
                    last_iterate=grid,
                    iteration=iteration,
                    message="Every trial step approached a collision.",
                )
            logger.debug("Line search stalled at iteration %d.", iteration)
            break

        grid, value = trial, trial_value
        iteration += 1

    converged = gradient_norm <= opt_tol
    trajectory = reconstruct(problem, grid)
    residual = euler_lagrange_residual(problem.model, trajectory)
    logger.info(
        "Minimisation %s after %d iterations: action %.12g, gradient %.3e.",
        "converged" if converged else "stopped",
        iteration,
        value,
        gradient_norm,
    )

    return SynthesisReport(
        trajectory,
        grid,
        initial_grid,
        float(initial_action),
        float(value),
        iteration,
        gradient_norm,
        residual,
        hit_guard,
        converged,
    )
