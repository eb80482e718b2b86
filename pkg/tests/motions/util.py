""" Models and initial data for motion synthesis tests. """
import numpy as np

from expansive import Configuration, MassSystem, PotentialModel
from expansive.action import ActionProblem
from expansive.paths import HyperbolicPath

OFFSET = np.array([[0.05, 0.0], [0.0, -0.05], [-0.05, 0.05]])
CLUSTERED = [[5.0, 0.0], [5.0, 0.0], [-10.0, 0.0]]
SPREAD = [[1.0, 0.0], [-1.0, 0.5], [0.2, -1.0]]


def three_body(alpha, masses=(1.0, 1.0, 1.0)):

    return PotentialModel(alpha, MassSystem(list(masses)))


def two_body_hyperbolic(alpha=1.5):
    """Two unit masses passing each other with asymptotic velocities
    ``(+-1, 0)``."""

    model = PotentialModel(alpha, MassSystem([1.0, 1.0]))
    a = Configuration([[1.0, 0.0], [-1.0, 0.0]], model.system)
    x0 = Configuration([[0.0, 0.5], [0.0, -0.5]], model.system)
    return model, x0, a


def offset_start(path):
    """ A configuration close to the start of ``path``. """

    start = path.state(1.0)[0]
    return Configuration(start + OFFSET, path.system)


def hyperbolic_problem(horizon=1e3, **kwargs):

    model = three_body(1.5)
    path = HyperbolicPath(model, Configuration(SPREAD, model.system))
    return ActionProblem(
        model, path, offset_start(path), horizon=horizon, **kwargs
    )
