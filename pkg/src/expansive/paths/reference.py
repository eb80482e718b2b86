""" Functions evaluating reference paths. """
import numpy as np


def reference_state(path, t):
    """Return the position, velocity and acceleration of ``path`` at ``t`` as
    flat ``dN``-vectors (or arrays of them for an array of times)."""

    system = path.system
    return tuple(system.flat(value) for value in path.state(t))


def defect(model, path, t):
    """Measure how far ``path`` is from solving Newton's equations.

    Parameters
    ----------
    model : PotentialModel
    path : BaseReferencePath
    t : float or array-like
        Times, each at least one.

    Returns
    -------
    float or np.ndarray
        ``|M r_0''(t) - grad U(r_0(t))|`` in the dual norm.
    """

    system = model.system
    position, _, acceleration = path.state(t)
    residual = system.masses[:, None] * acceleration - model.gradient(position)
    value = system.dual_norm(residual)
    return float(value) if np.ndim(value) == 0 else value
