""" The homogeneous pair potential and its derivatives of every order. """
import functools

import numpy as np

from expansive.exceptions import (
    DomainError,
    SingularityError,
    UnsupportedOrderError,
)
from expansive.system import Configuration

Q_MAX = 8


@functools.lru_cache(maxsize=None)
def _pairings(size):
    """All partitions of ``range(size)`` into blocks of one or two elements.
    The block holding ``0`` always comes first."""

    def _partitions(elements):
        if not elements:
            yield ()
            return

        first, rest = elements[0], elements[1:]
        for partition in _partitions(rest):
            yield ((first,),) + partition
        for idx, other in enumerate(rest):
            remaining = rest[:idx] + rest[idx + 1 :]
            for partition in _partitions(remaining):
                yield ((first, other),) + partition

    return tuple(_partitions(tuple(range(size))))


class PotentialModel:
    """The potential ``U(x) = sum_{i<j} m_i m_j / |r_i - r_j|^alpha``.

    Every pair term is ``g(u) = f(|u|^2)`` with the radial profile
    ``f(s) = s^(-alpha/2)``, so derivatives of any order are assembled from
    the scalar derivatives of ``f`` and contractions of ``u`` against the
    direction vectors.

    Parameters
    ----------
    alpha : float
        The (positive) homogeneity exponent.
    system : MassSystem
        The bodies the potential acts on.
    q_max : int
        The largest number of directions accepted by
        ``directional_derivative``.

    Attributes
    ----------
    weights : np.ndarray
        The products ``m_i m_j`` in the order of ``system.pairs``.
    """

    def __init__(self, alpha, system, q_max=Q_MAX):

        if not alpha > 0:
            raise DomainError(alpha=alpha, message="alpha must be positive.")

        self.alpha = float(alpha)
        self.system = system
        self.q_max = int(q_max)

        i, j = np.array(system.pairs).T
        self.weights = system.masses[i] * system.masses[j]

    def __repr__(self):

        return f"PotentialModel(alpha={self.alpha}, system={self.system})"

    def radial_derivative(self, s, order):
        """ The ``order``-th derivative of ``f(s) = s^(-alpha/2)``. """

        power = -self.alpha / 2
        factor = np.prod([power - i for i in range(order)])
        return factor * s ** (power - order)

    def _squared_separations(self, x):
        """Return the pair separations and their squared lengths, raising a
        ``SingularityError`` for the first pair found inside the collision
        set."""

        u = self.system.separations(x)
        s = np.einsum("...pd,...pd->...p", u, u)

        distances = np.sqrt(s)
        threshold = self.system.eps_collision * distances.max(axis=-1)
        bad = (distances < threshold[..., None]) | (distances == 0)
        if np.any(bad):
            index = tuple(int(k) for k in np.argwhere(bad)[0])
            node, pair = index[:-1], self.system.pairs[index[-1]]
            raise SingularityError(
                pair=pair,
                distance=float(distances[index]),
                node=node if node else None,
                message=f"Bodies {pair[0]} and {pair[1]} collide.",
            )

        return u, s

    def _weights(self, pairs):

        return self.weights if pairs is None else self.weights * pairs

    def pair_energies(self, x, pairs=None):
        """The terms ``m_i m_j |r_i - r_j|^(-alpha)`` with shape ``(..., P)``.
        ``pairs`` is an optional boolean mask over ``system.pairs``."""

        _, s = self._squared_separations(self.system.coords(x))
        return self._weights(pairs) * s ** (-self.alpha / 2)

    def energy(self, x, pairs=None):
        """ The potential of ``x``, broadcast over leading axes. """

        return self.pair_energies(x, pairs).sum(axis=-1)

    def gradient(self, x, pairs=None):
        """ The Euclidean gradient with shape ``(..., N, d)``. """

        x = self.system.coords(x)
        u, s = self._squared_separations(x)
        coef = -self.alpha * self._weights(pairs) * s ** (-self.alpha / 2 - 1)
        forces = coef[..., None] * u

        grad = np.zeros_like(x)
        for k, (i, j) in enumerate(self.system.pairs):
            grad[..., i, :] += forces[..., k, :]
            grad[..., j, :] -= forces[..., k, :]

        return grad

    def mass_gradient(self, x):
        """ The gradient with respect to the mass metric, ``M^{-1} grad U``. """

        return self.gradient(x) / self.system.masses[:, None]

    def hessian(self, x, pairs=None):
        """ The Euclidean Hessian with shape ``(..., dN, dN)``. """

        x = self.system.coords(x)
        u, s = self._squared_separations(x)
        n, d = self.system.n_bodies, self.system.dim
        weights = self._weights(pairs)

        first = 2 * weights * self.radial_derivative(s, 1)
        second = 4 * weights * self.radial_derivative(s, 2)
        blocks = first[..., None, None] * np.eye(d) + second[
            ..., None, None
        ] * np.einsum("...a,...b->...ab", u, u)

        hess = np.zeros(x.shape[:-2] + (n, d, n, d))
        for k, (i, j) in enumerate(self.system.pairs):
            block = blocks[..., k, :, :]
            hess[..., i, :, i, :] += block
            hess[..., j, :, j, :] += block
            hess[..., i, :, j, :] -= block
            hess[..., j, :, i, :] -= block

        return hess.reshape(x.shape[:-2] + (n * d, n * d))

    def directional_derivative(self, a, directions):
        """Contract ``D^{q+1} U(a)`` against ``q`` directions, leaving one
        free slot.

        Parameters
        ----------
        a : array-like
            A collision-free configuration.
        directions : list of array-like
            The ``q`` direction vectors, ``1 <= q <= q_max``.

        Returns
        -------
        np.ndarray
            The resulting covector with shape ``(N, d)``. For ``q = 1`` this
            is the Hessian-vector product.
        """

        q = len(directions)
        if q < 1:
            raise DomainError(order=q, message="At least one direction.")
        if q > self.q_max:
            raise UnsupportedOrderError(order=q, max_order=self.q_max)

        a = self.system.coords(a)
        u, s = self._squared_separations(a)
        vs = np.array([self.system.coords(v) for v in directions])
        i_idx, j_idx = np.array(self.system.pairs).T
        deltas = vs[:, i_idx, :] - vs[:, j_idx, :]

        out = np.zeros_like(a)
        for k, (i, j) in enumerate(self.system.pairs):
            term = self._pair_contraction(u[k], s[k], deltas[:, k, :])
            out[i] += self.weights[k] * term
            out[j] -= self.weights[k] * term

        return out

    def _pair_contraction(self, u, s, deltas):
        """Sum over pairings of ``{0, ..., q}`` of the Faa di Bruno terms for
        ``f(|u|^2)``, with slot ``0`` left free."""

        q = len(deltas)
        ud = 2 * deltas @ u
        dd = 2 * deltas @ deltas.T
        radial = [self.radial_derivative(s, k) for k in range(q + 2)]

        total = np.zeros_like(u)
        for partition in _pairings(q + 1):
            head, rest = partition[0], partition[1:]
            vector = 2 * u if len(head) == 1 else 2 * deltas[head[1] - 1]

            scalar = radial[len(partition)]
            for block in rest:
                if len(block) == 1:
                    scalar = scalar * ud[block[0] - 1]
                else:
                    scalar = scalar * dd[block[0] - 1, block[1] - 1]

            total += scalar * vector

        return total


def _coords(model, x):

    return model.system.coords(x.coords if isinstance(x, Configuration) else x)


def potential_energy(model, x):
    """ The potential of a single configuration. """

    return float(model.energy(_coords(model, x)))


def potential_gradient(model, x):
    """ The Euclidean gradient as a flat ``dN``-vector. """

    return model.gradient(_coords(model, x)).reshape(-1)


def mass_gradient(model, x):

    return model.mass_gradient(_coords(model, x)).reshape(-1)


def newton_acceleration(model, x):
    """ The right-hand side ``M^{-1} grad U(x)`` of Newton's equations. """

    return mass_gradient(model, x)


def hessian(model, x):

    return model.hessian(_coords(model, x))


def directional_derivative(model, a, directions):
    """ Flat-vector wrapper of ``PotentialModel.directional_derivative``. """

    return model.directional_derivative(_coords(model, a), directions).reshape(
        -1
    )


def hessian_lower_bound(model, central=None):
    """Return the constant ``c`` with ``<D^2U(beta b) v, v> >= c |v|_M^2``
    when ``b`` is a minimal central configuration of ``model``; it is
    ``-2 alpha / (2 + alpha)^2`` whatever the configuration.

    Raises
    ------
    DomainError
        If ``central`` belongs to a potential of another ``alpha``.
    """

    alpha = model.alpha
    if central is not None and central.alpha != alpha:
        raise DomainError(
            alpha=alpha,
            central_alpha=central.alpha,
            message="The central configuration belongs to another potential.",
        )

    return -2 * alpha / (2 + alpha) ** 2
