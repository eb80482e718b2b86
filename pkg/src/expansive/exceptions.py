""" Exceptions and warnings raised across the library. """


class ExpansiveError(Exception):
    """ A generic error for when a computation cannot go ahead. """

    def __init__(self, **kwargs):

        for key, val in kwargs.items():
            self.__setattr__(key, val)

        self.message = kwargs
        super().__init__(self.message)


class DimensionError(ExpansiveError, ValueError):
    """ An error for arrays whose shape does not match the mass system. """


class DomainError(ExpansiveError, ValueError):
    """ An error for arguments outside the domain of an operation. """


class SingularityError(ExpansiveError):
    """An error for configurations in (or numerically at) the collision set.
    Carries the offending ``pair`` of body indices."""


class UnsupportedOrderError(ExpansiveError):
    """ An error for derivative orders beyond the supported maximum. """


class ResonanceError(ExpansiveError):
    """ An error for exponents with ``k * alpha == 1`` in the recursion. """


class ConvergenceError(ExpansiveError):
    """ An error for solvers that stop without meeting their tolerance. """


class CollisionGuardError(ExpansiveError):
    """An error for minimisations whose line search keeps running into the
    collision guard."""


class ClassificationError(ExpansiveError):
    """ An error for trajectories that are not expansive. """


class NonConvergenceWarning(UserWarning):
    """ A warning for when a solver returns a non-converged result. """


class ConditioningWarning(UserWarning):
    """ A warning for ill-conditioned least-squares fits. """


class EnergyDriftWarning(UserWarning):
    """ A warning for integrations whose energy drifts past tolerance. """


class OneSidedBoundWarning(UserWarning):
    """A warning for fitted exponents that sit inside the acceptance margin
    but above the theoretical bound."""
