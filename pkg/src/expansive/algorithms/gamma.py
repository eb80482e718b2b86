""" The correction vectors of the hyperbolic reference path. """
import itertools
import math

import numpy as np

from expansive.exceptions import DomainError, ResonanceError

RESONANCE_TOL = 1e-6


def compositions(total, parts):
    """Return every ordered tuple of ``parts`` positive integers summing to
    ``total``."""

    if parts < 1 or total < parts:
        return []

    result = []
    for cuts in itertools.combinations(range(1, total), parts - 1):
        bounds = (0,) + cuts + (total,)
        result.append(
            tuple(bounds[i + 1] - bounds[i] for i in range(parts))
        )

    return result


def expansion_order(alpha):
    """The number ``P`` of correction vectors in the hyperbolic expansion:
    ``floor(1 / (2 alpha)) + 1`` for ``alpha <= 1/2`` and one otherwise."""

    if alpha <= 0.5:
        return int(math.floor(1 / (2 * alpha) + 1e-12)) + 1
    return 1


def reference_order(alpha):
    """ The number ``m = floor(1 / (2 alpha))`` of corrections in ``r_0``. """

    return int(math.floor(1 / (2 * alpha) + 1e-12))


def is_borderline(alpha):
    """ Whether ``1 / (2 alpha)`` is a whole number. """

    ratio = 1 / (2 * alpha)
    return abs(ratio - round(ratio)) < 1e-9


class GammaCoefficients:
    """The vectors ``Gamma_k`` of the expansion
    ``a t + sum_k Gamma_k t^(1 - k alpha)``.

    Parameters
    ----------
    alpha : float
    a : Configuration
        The collision-free asymptotic velocity.
    gammas : list of np.ndarray
        ``Gamma_1, ..., Gamma_P`` as flat ``dN``-vectors.
    tilde_gamma : np.ndarray or None
        The log coefficient ``-M^{-1} D^2U(a) Gamma_1`` used when
        ``alpha = 1/2``.

    Attributes
    ----------
    expansion_order : int
        ``P``, the number of vectors the expansion uses.
    reference_order : int
        ``m = floor(1 / (2 alpha))``, the number used in ``r_0``.
    borderline : bool
        Whether ``1 / (2 alpha)`` is a whole number.
    """

    def __init__(self, alpha, a, gammas, tilde_gamma=None):

        self.alpha = alpha
        self.a = a
        self.gammas = [np.asarray(g, dtype=float) for g in gammas]
        self.tilde_gamma = tilde_gamma

        self.expansion_order = expansion_order(alpha)
        self.reference_order = reference_order(alpha)
        self.borderline = is_borderline(alpha)

    def __repr__(self):

        return (
            f"GammaCoefficients(alpha={self.alpha}, "
            f"computed={len(self.gammas)}, P={self.expansion_order})"
        )

    def __len__(self):

        return len(self.gammas)

    def __getitem__(self, k):
        """ Return ``Gamma_k``, counting from one. """

        if not 1 <= k <= len(self.gammas):
            raise IndexError(f"Gamma_{k} has not been computed.")
        return self.gammas[k - 1]

    def to_dict(self):

        data = self.a.to_dict(key="a")
        data.update(
            {
                "alpha": self.alpha,
                "expansion_order": self.expansion_order,
                "borderline": self.borderline,
                "gammas": [g.tolist() for g in self.gammas],
                "tilde_gamma": None
                if self.tilde_gamma is None
                else self.tilde_gamma.tolist(),
            }
        )
        return data


def _check_resonances(alpha, order):

    for k in range(1, order + 1):
        if abs(k * alpha - 1) < RESONANCE_TOL:
            raise ResonanceError(
                k=k,
                alpha=alpha,
                message=f"The denominator k alpha (1 - k alpha) vanishes "
                f"for k = {k}.",
            )


def gamma_coefficients(model, a, order=None):
    """Compute the correction vectors by the recursion

        ``Gamma_k = -M^{-1} R_{k-1} / (k alpha (1 - k alpha))``,

    where ``R_n`` sums ``D^{q+1} U(a)[Gamma_{j_1}, ..., Gamma_{j_q}] / q!``
    over the ordered compositions ``j_1 + ... + j_q = n``.

    Parameters
    ----------
    model : PotentialModel
    a : Configuration
        A collision-free asymptotic velocity.
    order : int or None
        How many vectors to compute. Defaults to the expansion order ``P``.

    Returns
    -------
    GammaCoefficients

    Raises
    ------
    DomainError
        For ``alpha = 1``, whose expansion has a log term instead of
        ``Gamma_1``.
    ResonanceError
        If ``k alpha = 1`` for some needed ``k``.
    """

    alpha = model.alpha
    if abs(alpha - 1) < RESONANCE_TOL:
        raise DomainError(
            alpha=alpha,
            message="alpha = 1 has the term -M^{-1} grad U(a) log t in "
            "place of Gamma_1; the reference path is r_0 = a t.",
        )

    half = math.isclose(alpha, 0.5, rel_tol=1e-12)
    if order is None:
        order = 1 if half else expansion_order(alpha)
    _check_resonances(alpha, order)

    masses = model.system.masses[:, None]
    coords = model.system.coords(a)
    gradient = model.gradient(coords)

    gammas = [-gradient / masses / (alpha * (1 - alpha))]
    for k in range(2, order + 1):
        remainder = np.zeros_like(coords)
        for q in range(1, k):
            for parts in compositions(k - 1, q):
                directions = [gammas[j - 1] for j in parts]
                remainder += (
                    model.directional_derivative(coords, directions)
                    / math.factorial(q)
                )

        gammas.append(-remainder / masses / (k * alpha * (1 - k * alpha)))

    tilde_gamma = None
    if half:
        hessian = model.hessian(coords)
        mass_vector = model.system.mass_vector
        tilde_gamma = -(hessian @ gammas[0].reshape(-1)) / mass_vector

    return GammaCoefficients(
        alpha, a, [g.reshape(-1) for g in gammas], tilde_gamma
    )
