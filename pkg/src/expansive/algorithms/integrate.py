""" Forward integration of Newton's equations and residual diagnostics. """
import logging
import math
import warnings

import numpy as np
from scipy.integrate import solve_ivp

from expansive.exceptions import (
    DimensionError,
    DomainError,
    EnergyDriftWarning,
    SingularityError,
)
from expansive.system import Configuration, is_collision
from expansive.trajectory import Provenance, Trajectory, total_energies

logger = logging.getLogger(__name__)

RTOL = 1e-10
DRIFT_FACTOR = 100
APPROACH_RATIO = 1e-6


def total_energy(model, x, v):
    """Return the energy ``1/2 |v|_M^2 - U(x)`` of a state.

    Parameters
    ----------
    model : PotentialModel
    x : Configuration or array-like
    v : array-like
        The velocities, flat or of shape ``(N, d)``.

    Returns
    -------
    float
    """

    system = model.system
    return float(total_energies(model, system.coords(x), system.coords(v)))


def stencil_weights(times, width=5):
    """Return finite-difference weights for the first derivative at every
    sample of a non-uniform grid.

    Interior samples use centred stencils of ``width`` points; samples near
    either end use the nearest ``width`` points instead.

    Returns
    -------
    tuple of np.ndarray
        The stencil indices and weights, each of shape ``(K, width)``.
    """

    times = np.asarray(times, dtype=float)
    size = times.size
    width = min(width, size)
    if width < 2:
        raise DimensionError(samples=size, message="Need two samples.")

    starts = np.clip(np.arange(size) - width // 2, 0, size - width)
    index = starts[:, None] + np.arange(width)
    offsets = times[index] - times[:, None]
    scale = np.abs(offsets).max(axis=1, keepdims=True)

    powers = np.arange(width)
    factorials = np.array([math.factorial(k) for k in powers], dtype=float)
    vandermonde = (offsets / scale)[:, None, :] ** powers[None, :, None]
    vandermonde /= factorials[None, :, None]

    target = np.zeros((size, width))
    target[:, 1] = 1
    weights = np.linalg.solve(vandermonde, target[..., None])[..., 0]
    return index, weights / scale


def differentiate(times, values, width=5):
    """ Differentiate samples of shape ``(K, ...)`` with respect to time. """

    index, weights = stencil_weights(times, width)
    values = np.asarray(values, dtype=float)
    return np.einsum("kj,kj...->k...", weights, values[index])


def euler_lagrange_residual(model, trajectory):
    """Measure how far a trajectory is from solving Newton's equations.

    Accelerations come from differentiating the sampled velocities with
    fourth-order (five-point) stencils, and only interior samples with a
    centred stencil are checked.

    Parameters
    ----------
    model : PotentialModel
    trajectory : Trajectory
        At least three samples.

    Returns
    -------
    float
        The largest ``|M x'' - grad U(x)| / |grad U(x)|`` in the dual norm.
    """

    size = len(trajectory)
    if size < 3:
        raise DimensionError(samples=size, message="Need three samples.")

    width = 5 if size >= 5 else 3
    system = model.system
    interior = slice(width // 2, size - width // 2)

    index, weights = stencil_weights(trajectory.times, width)
    velocities = trajectory.velocities[index[interior]]
    accelerations = np.einsum("kj,kjnd->knd", weights[interior], velocities)

    positions = trajectory.positions[interior]
    forces = model.gradient(positions)
    residual = system.masses[:, None] * accelerations - forces
    ratios = system.dual_norm(residual) / system.dual_norm(forces)
    return float(ratios.max())


def sample_times(t0, t1, n_samples, spacing="geometric"):
    """ Sample times on ``[t0, t1]``, geometric or linear. """

    if spacing == "geometric":
        times = np.geomspace(t0, t1, n_samples)
    elif spacing == "linear":
        times = np.linspace(t0, t1, n_samples)
    else:
        raise DomainError(spacing=spacing, allowed=("geometric", "linear"))

    times[0], times[-1] = t0, t1
    return times


def _closest_pair(system, state):

    size = system.size
    x, v = system.coords(state[:size]), system.coords(state[size:])
    u, du = system.separations(x), system.separations(v)
    distances = np.linalg.norm(u, axis=-1)
    k = int(np.argmin(distances))
    rate = float(u[k] @ du[k] / distances[k])
    return k, float(distances[k]), rate, float(distances.max())


def _approach_error(model, t, state, direction=1):
    """Build the error for a run stopped by a close approach. ``direction``
    is -1 for runs backward in time."""

    system = model.system
    k, distance, rate, _ = _closest_pair(system, state)
    rate = direction * rate
    power = 2 / (2 + model.alpha)
    blow_up = (
        t + direction * power * distance / -rate if rate < 0 else math.inf
    )

    return SingularityError(
        pair=system.pairs[k],
        distance=distance,
        time=float(t),
        blow_up_estimate=blow_up,
        message=f"Bodies {system.pairs[k]} approach collision near "
        f"t = {blow_up:.6g}.",
    )


def integrate_newton(
    model,
    x0,
    v0,
    t0=1.0,
    t1=100.0,
    rtol=RTOL,
    atol=None,
    samples=None,
    n_samples=1000,
    spacing="geometric",
):
    """Integrate ``M x'' = grad U(x)`` from ``(x0, v0)`` at ``t0`` to ``t1``,
    forward or backward in time.

    The adaptive 8(5,3) Dormand-Prince pair is used. The run stops if the
    closest pair of bodies comes within ``1e-6`` of the widest separation.

    Parameters
    ----------
    model : PotentialModel
    x0 : Configuration
        A collision-free initial configuration.
    v0 : array-like
        The initial velocities.
    t0, t1 : float
        The time span, both at least one. ``t1 < t0`` integrates backward.
    rtol, atol : float
        Integrator tolerances. ``atol`` defaults to ``rtol * 1e-2``.
    samples : array-like or None
        Increasing sample times between ``t0`` and ``t1``. When ``None``,
        ``n_samples`` times are spaced by ``spacing``.

    Returns
    -------
    Trajectory
        Sampled at increasing times whatever the direction, with ``energy``
        the energy at ``t1`` and ``energy_drift`` the largest
        change of energy relative to ``1/2 |v0|_M^2 + U(x0)``.

    Raises
    ------
    SingularityError
        If ``x0`` is in collision, or the run approaches one. In the latter
        case the error carries a ``blow_up_estimate`` of the collision time.
    """

    system = model.system
    if isinstance(x0, Configuration) and x0.system != system:
        raise DomainError(message="x0 belongs to a different system.")
    if min(t0, t1) < 1 or t0 == t1:
        raise DomainError(
            t0=t0, t1=t1, message="Need t0, t1 >= 1 and t0 != t1."
        )
    low, high = min(t0, t1), max(t0, t1)
    direction = 1 if t1 > t0 else -1

    x0 = Configuration(system.coords(x0), system)
    if is_collision(x0):
        raise SingularityError(
            configuration=x0, message="x0 lies in the collision set."
        )

    v0 = system.coords(v0)
    if samples is None:
        samples = sample_times(low, high, n_samples, spacing)
    samples = np.asarray(samples, dtype=float)
    if samples[0] < low or samples[-1] > high:
        raise DomainError(message="Samples must lie between t0 and t1.")

    size = system.size
    masses = system.mass_vector

    def rhs(t, state):

        acceleration = model.gradient(state[:size]).reshape(-1) / masses
        return np.concatenate([state[size:], acceleration])

    def approach(t, state):

        _, distance, _, widest = _closest_pair(system, state)
        return distance - APPROACH_RATIO * widest

    approach.terminal = True

    state = np.concatenate([x0.flat, v0.reshape(-1)])
    solution = solve_ivp(
        rhs,
        (t0, t1),
        state,
        method="DOP853",
        t_eval=samples[::direction],
        events=approach,
        rtol=rtol,
        atol=rtol * 1e-2 if atol is None else atol,
    )

    if solution.status == 1:
        raise _approach_error(
            model,
            solution.t_events[0][0],
            solution.y_events[0][0],
            direction,
        )
    if solution.status != 0:
        raise _approach_error(
            model, solution.t[-1], solution.y[:, -1], direction
        )

    times, states = solution.t[::direction], solution.y[:, ::direction]
    positions, velocities = states[:size].T, states[size:].T
    energies = total_energies(model, positions, velocities)
    initial = total_energy(model, x0, v0)
    scale = 0.5 * system.inner(v0, v0) + model.energy(x0.coords)
    drift = float(np.abs(energies - initial).max() / scale)

    logger.info(
        "Integrated %s over [%g, %g] in %d evaluations; drift %.3g.",
        system,
        t0,
        t1,
        solution.nfev,
        drift,
    )
    if drift > DRIFT_FACTOR * rtol:
        warnings.warn(
            EnergyDriftWarning(
                f"Relative energy drift {drift:.3g} exceeds "
                f"{DRIFT_FACTOR} * rtol = {DRIFT_FACTOR * rtol:.3g}."
            )
        )

    trajectory = Trajectory(
        times,
        positions,
        velocities,
        system,
        model.alpha,
        Provenance.INTEGRATED,
        energy=float(energies[-1 if direction > 0 else 0]),
        metadata={"t0": t0, "t1": t1, "rtol": rtol},
    )
    trajectory.energy_drift = drift
    return trajectory
