""" Configuration-space primitives: masses, the mass metric and barycenters. """
import itertools

import numpy as np

from expansive.exceptions import DimensionError, DomainError

EPS_COLLISION = 1e-9


class MassSystem:
    """A collection of point masses moving in ``dim``-dimensional space.

    Parameters
    ----------
    masses : array-like of float
        The (strictly positive) masses of the bodies.
    dim : int
        The spatial dimension. Must be at least 2.
    eps_collision : float
        Relative threshold for the numerical collision set. A configuration
        is in collision when its minimum mutual distance is below
        ``eps_collision`` times its maximum mutual distance.

    Attributes
    ----------
    n_bodies : int
        The number of bodies, at least 2.
    total_mass : float
        The sum of the masses.
    mass_vector : np.ndarray
        The diagonal of the mass matrix, each mass repeated ``dim`` times.
    pairs : list of (int, int)
        All index pairs ``i < j``.
    """

    def __init__(self, masses, dim=2, eps_collision=EPS_COLLISION):

        masses = np.asarray(masses, dtype=float)
        if masses.ndim != 1 or masses.size < 2:
            raise DimensionError(
                masses=masses, message="At least two masses are required."
            )
        if np.any(masses <= 0) or not np.all(np.isfinite(masses)):
            raise DomainError(
                masses=masses, message="Every mass must be strictly positive."
            )
        if int(dim) != dim or dim < 2:
            raise DomainError(dim=dim, message="The dimension must be >= 2.")
        if eps_collision < 0:
            raise DomainError(eps_collision=eps_collision)

        self.masses = masses
        self.dim = int(dim)
        self.eps_collision = float(eps_collision)

        self.n_bodies = masses.size
        self.total_mass = float(masses.sum())
        self.mass_vector = np.repeat(masses, self.dim)
        self.pairs = list(itertools.combinations(range(self.n_bodies), 2))

    def __repr__(self):

        return (
            f"MassSystem(masses={self.masses.tolist()}, dim={self.dim})"
        )

    def __eq__(self, other):

        return (
            isinstance(other, MassSystem)
            and self.dim == other.dim
            and np.array_equal(self.masses, other.masses)
        )

    def __hash__(self):

        return hash((self.dim, tuple(self.masses)))

    @property
    def size(self):
        """ The dimension ``dN`` of the full configuration space. """

        return self.n_bodies * self.dim

    def coords(self, x):
        """Return ``x`` as an array of shape ``(..., N, d)``. Accepts a
        ``Configuration``, a flat ``dN``-vector or already-shaped arrays."""

        if isinstance(x, Configuration):
            x = x.coords

        x = np.asarray(x, dtype=float)
        n, d = self.n_bodies, self.dim
        if x.shape[-2:] == (n, d):
            return x
        if x.shape and x.shape[-1] == n * d:
            return x.reshape(x.shape[:-1] + (n, d))

        raise DimensionError(
            shape=x.shape, expected=(n, d), message="Shape mismatch."
        )

    def flat(self, x):
        """ Return ``x`` with its body and space axes merged. """

        x = self.coords(x)
        return x.reshape(x.shape[:-2] + (self.size,))

    def inner(self, x, y):
        """ The mass inner product, broadcast over leading axes. """

        x, y = self.coords(x), self.coords(y)
        return np.einsum("...id,...id,i->...", x, y, self.masses)

    def norm(self, x):
        """ The mass norm of ``x``. """

        return np.sqrt(self.inner(x, x))

    def dual_norm(self, v):
        """ The norm dual to the mass metric, for forces. """

        v = self.coords(v)
        return np.sqrt(np.einsum("...id,...id,i->...", v, v, 1 / self.masses))

    def barycenter(self, x):

        x = self.coords(x)
        return np.einsum("...id,i->...d", x, self.masses) / self.total_mass

    def project(self, x):
        """ Subtract the barycenter from every body. """

        x = self.coords(x)
        return x - self.barycenter(x)[..., None, :]

    def separations(self, x):
        """Return the pair difference vectors ``r_i - r_j`` with shape
        ``(..., P, d)`` in the order of ``pairs``."""

        x = self.coords(x)
        i, j = np.array(self.pairs).T
        return x[..., i, :] - x[..., j, :]

    def distances(self, x):

        return np.linalg.norm(self.separations(x), axis=-1)

    def collision_threshold(self, x):
        """ The absolute collision distance for each configuration in ``x``. """

        return self.eps_collision * self.distances(x).max(axis=-1)

    def subsystem(self, indices):
        """ Make the system of the bodies in ``indices``. """

        return MassSystem(
            self.masses[list(indices)], self.dim, self.eps_collision
        )


class Configuration:
    """A point ``x = (r_1, ..., r_N)`` of the configuration space.

    Parameters
    ----------
    coords : array-like
        The positions, of shape ``(N, d)`` or a flat ``dN``-vector.
    system : MassSystem
        The system the configuration belongs to.
    """

    def __init__(self, coords, system):

        self.system = system
        self.coords = np.array(system.coords(coords), dtype=float)
        if self.coords.ndim != 2:
            raise DimensionError(shape=self.coords.shape)

    def __repr__(self):

        return f"Configuration({self.coords.tolist()})"

    def __array__(self, dtype=None):

        return self.coords if dtype is None else self.coords.astype(dtype)

    @property
    def flat(self):

        return self.coords.reshape(-1)

    @classmethod
    def from_dict(cls, data, key="positions"):
        """Create a configuration from the JSON schema
        ``{"dim": d, "masses": [...], "positions": [[...], ...]}``."""

        system = MassSystem(data["masses"], data.get("dim", 2))
        return cls(data[key], system)

    def to_dict(self, key="positions"):

        return {
            "dim": self.system.dim,
            "masses": self.system.masses.tolist(),
            key: self.coords.tolist(),
        }


def _check_same_system(x, y):

    if x.system != y.system:
        raise DimensionError(
            systems=(x.system, y.system),
            message="Configurations belong to different mass systems.",
        )


def mass_inner_product(x, y):
    """Compute the mass inner product of two configurations.

    Parameters
    ----------
    x, y : Configuration
        Configurations of the same system.

    Returns
    -------
    float
        The sum over bodies of ``m_i <r_i, s_i>``.
    """

    _check_same_system(x, y)
    return float(x.system.inner(x.coords, y.coords))


def mass_norm(x):

    return float(x.system.norm(x.coords))


def dual_norm(system, v):
    """ The ``M^{-1}`` norm of a force-like vector ``v``. """

    return float(system.dual_norm(v))


def project_center_of_mass(x):
    """ Return a copy of ``x`` translated so that its barycenter is zero. """

    return Configuration(x.system.project(x.coords), x.system)


def min_max_mutual_distance(x):
    """Return the smallest and largest mutual distances of a configuration.
    The minimum is zero exactly when two bodies coincide."""

    distances = x.system.distances(x.coords)
    return float(distances.min()), float(distances.max())


def is_collision(x, eps_collision=None):
    """Check whether ``x`` lies in the numerical collision set, relative to
    its largest mutual distance."""

    eps = x.system.eps_collision if eps_collision is None else eps_collision
    r_min, r_max = min_max_mutual_distance(x)
    return r_max == 0 or r_min < eps * r_max
