""" Problems and strategies for action tests. """
import functools

import numpy as np
from hypothesis.strategies import composite, floats, integers

from expansive import Configuration, MassSystem, PotentialModel
from expansive.action import ActionProblem, PerturbationGrid
from expansive.algorithms.central_configuration import (
    find_central_configuration,
)
from expansive.paths import (
    HyperbolicParabolicPath,
    HyperbolicPath,
    ParabolicPath,
)

REGIMES = ("H", "P", "HP")


@functools.lru_cache(maxsize=None)
def reference_path(regime, alpha=None):
    """ A three-body equal-mass reference path of each regime. """

    system = MassSystem([1.0, 1.0, 1.0])
    if regime == "H":
        model = PotentialModel(alpha or 1.5, system)
        a = Configuration([[1, 0], [-1, 0.5], [0.2, -1]], system)
        return HyperbolicPath(model, a)

    model = PotentialModel(alpha or 1.0, system)
    if regime == "P":
        central = find_central_configuration(model, seed=0, starts=4)
        return ParabolicPath(model, central)

    a = Configuration([[5, 0], [5, 0], [-10, 0]], system)
    return HyperbolicParabolicPath(model, a, seed=0, starts=4)


def make_problem(regime, horizon=100.0, offset=0.1, **kwargs):
    """Set up the problem of a reference path with ``x0`` displaced from
    ``r_0(1)`` by a fixed small vector."""

    path = reference_path(regime)
    start = path.state(1.0)[0]
    displacement = offset * np.array([[1, 0], [0, -1], [-1, 1]])
    x0 = Configuration(start + displacement, path.system)
    return ActionProblem(path.model, path, x0, horizon=horizon, **kwargs)


def random_grid(problem, n_intervals, seed, amplitude=0.05):
    """ A random smooth-enough perturbation vanishing at ``t = 1``. """

    rng = np.random.default_rng(seed)
    grid = problem.grid(n_intervals)
    ramp = (1 - 1 / grid.nodes)[:, None, None]
    values = amplitude * ramp * rng.normal(size=grid.values.shape)
    return grid.with_values(values)


@composite
def grid_functions(draw, max_intervals=60):
    """A custom strategy for random perturbations on geometric or uniform
    meshes of random horizons."""

    system = MassSystem([1.0, 2.0])
    horizon = draw(floats(min_value=2, max_value=1e4))
    n_intervals = draw(integers(min_value=5, max_value=max_intervals))
    kind = "geometric" if draw(integers(0, 1)) else "uniform"
    seed = draw(integers(min_value=0, max_value=2 ** 32 - 1))

    grid = getattr(PerturbationGrid, kind)(system, horizon, n_intervals)
    rng = np.random.default_rng(seed)
    values = rng.normal(size=grid.values.shape)
    return grid.with_values(values[1:])
