""" Functions for synthesising motions from regime data. """
from expansive.action import DEFAULT_NODES, ActionProblem
from expansive.algorithms.minimize import (
    MAX_ITERS,
    OPT_TOL,
    initial_guess,
    minimize_action,
)
from expansive.base import Regime
from expansive.exceptions import DomainError


def minimize_on_path(
    model,
    path,
    x0,
    opt_tol=OPT_TOL,
    max_iters=MAX_ITERS,
    n_intervals=DEFAULT_NODES,
    **problem_options,
):
    """Set up the action problem of ``x0`` around ``path`` on a geometric
    grid and minimise it from the default initial guess."""

    problem = ActionProblem(model, path, x0, **problem_options)
    init = initial_guess(problem, problem.grid(n_intervals))
    return minimize_action(problem, init, opt_tol, max_iters)


def synthesize_trajectory(
    model,
    regime,
    x0,
    a=None,
    central=None,
    opt_tol=OPT_TOL,
    max_iters=MAX_ITERS,
    **options,
):
    """Synthesise an expansive motion starting at ``x0``.

    Parameters
    ----------
    model : PotentialModel
    regime : Regime or str
        ``"H"``, ``"P"`` or ``"HP"``.
    x0 : Configuration
        The initial configuration.
    a : Configuration or None
        The asymptotic velocity, for hyperbolic and hyperbolic-parabolic
        motions.
    central : CentralConfiguration or None
        The central configuration of a parabolic motion. Found when
        ``None``.
    opt_tol, max_iters
        Passed to ``minimize_action``.
    **options
        Grid and problem options: ``horizon``, ``n_intervals``,
        ``tail_mode``, ``renormalized``.

    Returns
    -------
    SynthesisReport
    """

    from expansive.motions import (
        HyperbolicMotion,
        HyperbolicParabolicMotion,
        ParabolicMotion,
    )

    regime = Regime(regime)
    if regime is not Regime.PARABOLIC and a is None:
        raise DomainError(
            regime=regime, message="This regime needs a velocity a."
        )

    if regime is Regime.HYPERBOLIC:
        motion = HyperbolicMotion(model, x0, a, **options)
    elif regime is Regime.PARABOLIC:
        motion = ParabolicMotion(model, x0, central, **options)
    else:
        motion = HyperbolicParabolicMotion(model, x0, a, **options)

    motion.solve(opt_tol, max_iters)
    return motion.report
