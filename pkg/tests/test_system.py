""" Tests for the mass system and configuration primitives. """
import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import floats, integers, lists

from expansive.exceptions import DimensionError, DomainError
from expansive.system import (
    Configuration,
    MassSystem,
    dual_norm,
    is_collision,
    mass_inner_product,
    mass_norm,
    min_max_mutual_distance,
    project_center_of_mass,
)

MASSES = lists(
    floats(min_value=0.1, max_value=10), min_size=2, max_size=5
)
SEEDS = integers(min_value=0, max_value=2 ** 32 - 1)


def random_configuration(system, seed):

    rng = np.random.default_rng(seed)
    return Configuration(
        rng.normal(size=(system.n_bodies, system.dim)), system
    )


@given(masses=MASSES, dim=integers(min_value=2, max_value=3))
def test_init(masses, dim):
    """ Make a mass system and check its attributes. """

    system = MassSystem(masses, dim)

    assert system.n_bodies == len(masses)
    assert system.dim == dim
    assert system.size == len(masses) * dim
    assert np.isclose(system.total_mass, sum(masses))
    assert len(system.pairs) == len(masses) * (len(masses) - 1) // 2
    assert all(i < j for i, j in system.pairs)
    assert system.mass_vector.size == system.size


def test_init_invalid():
    """ Check the mass system rejects bad masses and dimensions. """

    with pytest.raises(DimensionError):
        MassSystem([1.0])

    with pytest.raises(DomainError):
        MassSystem([1.0, -1.0])

    with pytest.raises(DomainError):
        MassSystem([1.0, 1.0], dim=1)


def test_equality():

    assert MassSystem([1, 2]) == MassSystem([1.0, 2.0])
    assert MassSystem([1, 2]) != MassSystem([1, 2], dim=3)
    assert MassSystem([1, 2]) != MassSystem([2, 1])


@given(masses=MASSES, seed=SEEDS)
def test_inner_product_positive(masses, seed):
    """ Check the mass inner product is positive definite. """

    system = MassSystem(masses)
    x = random_configuration(system, seed)

    assert mass_inner_product(x, x) > 0
    assert np.isclose(mass_norm(x) ** 2, mass_inner_product(x, x))

    zero = Configuration(np.zeros((system.n_bodies, 2)), system)
    assert mass_norm(zero) == 0


@given(masses=MASSES, seed=SEEDS)
def test_cauchy_schwarz(masses, seed):

    system = MassSystem(masses)
    x = random_configuration(system, seed)
    y = random_configuration(system, seed + 1)

    assert abs(mass_inner_product(x, y)) <= mass_norm(x) * mass_norm(y) * (
        1 + 1e-12
    )


def test_inner_product_different_systems():
    """ Check configurations of different systems cannot be paired. """

    x = Configuration([[0, 0], [1, 0]], MassSystem([1, 1]))
    y = Configuration([[0, 0], [1, 0]], MassSystem([1, 2]))

    with pytest.raises(DimensionError):
        mass_inner_product(x, y)


def test_inner_product_weights_masses():

    system = MassSystem([1, 3])
    x = Configuration([[1, 0], [0, 2]], system)

    assert np.isclose(mass_inner_product(x, x), 1 + 3 * 4)
    assert np.isclose(dual_norm(system, x.coords), np.sqrt(1 + 4 / 3))


@given(masses=MASSES, seed=SEEDS)
def test_project_center_of_mass(masses, seed):
    """Check the projection zeroes the barycenter, preserves every distance
    and is idempotent."""

    system = MassSystem(masses)
    x = random_configuration(system, seed)
    y = project_center_of_mass(x)

    assert np.allclose(system.barycenter(y.coords), 0, atol=1e-12)
    assert np.allclose(
        system.distances(x.coords), system.distances(y.coords), rtol=1e-12
    )
    assert np.allclose(project_center_of_mass(y).coords, y.coords)


def test_min_max_mutual_distance():

    two = Configuration([[1, 0], [-1, 0]], MassSystem([1, 1]))
    assert min_max_mutual_distance(two) == (2, 2)

    triangle = Configuration(
        [[0, 0], [1, 0], [0.5, np.sqrt(3) / 2]], MassSystem([1, 1, 1])
    )
    assert np.allclose(min_max_mutual_distance(triangle), (1, 1))

    collision = Configuration([[0, 0], [0, 0], [3, 0]], MassSystem([1, 1, 1]))
    assert min_max_mutual_distance(collision) == (0, 3)


def test_is_collision():
    """ Check the numerical collision set is relative to the system size. """

    system = MassSystem([1, 1, 1])
    near = Configuration([[0, 0], [1e-12, 0], [1, 0]], system)
    apart = Configuration([[0, 0], [1e-6, 0], [1, 0]], system)

    assert is_collision(near)
    assert not is_collision(apart)
    assert is_collision(apart, eps_collision=1e-3)


@given(masses=MASSES, seed=SEEDS)
def test_coords_shapes(masses, seed):
    """ Check flat vectors and batches are reshaped to ``(..., N, d)``. """

    system = MassSystem(masses)
    x = random_configuration(system, seed)
    batch = np.stack([x.coords, 2 * x.coords])

    assert np.array_equal(system.coords(x.flat), x.coords)
    assert system.coords(batch).shape == (2, system.n_bodies, 2)
    assert system.flat(batch).shape == (2, system.size)
    assert np.allclose(system.inner(batch, batch)[1], 4 * mass_norm(x) ** 2)

    with pytest.raises(DimensionError):
        system.coords(np.zeros(system.size + 1))


def test_configuration_dictionary():
    """ Check a configuration survives the JSON schema. """

    system = MassSystem([1, 2, 3], dim=3)
    x = Configuration(np.arange(9.0).reshape(3, 3), system)
    data = x.to_dict()

    assert data == {
        "dim": 3,
        "masses": [1.0, 2.0, 3.0],
        "positions": x.coords.tolist(),
    }

    y = Configuration.from_dict(data)
    assert y.system == system
    assert np.array_equal(y.coords, x.coords)


def test_subsystem():

    system = MassSystem([1, 2, 3])
    sub = system.subsystem([0, 2])

    assert np.array_equal(sub.masses, [1, 3])
    assert sub.eps_collision == system.eps_collision
