""" Tests for the Chazy classification of expansive trajectories. """
import numpy as np
import pytest

from expansive import Configuration, Regime
from expansive.algorithms.central_configuration import cluster_partition
from expansive.asymptotics import chazy_classify, cluster_center_drift
from expansive.exceptions import ClassificationError
from expansive.trajectory import Trajectory

from .util import (
    TIMES,
    VELOCITY,
    circular_trajectory,
    hp_trajectory,
    hyperbolic_path,
    parabolic_path,
)


@pytest.mark.parametrize("alpha", (1.5, 1.0, 0.3))
def test_hyperbolic(alpha):

    path = hyperbolic_path(alpha)
    trajectory = Trajectory.from_reference(path, TIMES)
    classification = chazy_classify(trajectory)

    assert classification.label is Regime.HYPERBOLIC
    assert classification.potential_exponent == pytest.approx(-alpha, abs=0.05)
    for exponent in classification.pair_exponents.values():
        assert exponent == pytest.approx(1, abs=0.05)
    assert np.allclose(classification.velocity, VELOCITY, atol=0.05)


def test_parabolic():

    trajectory = Trajectory.from_reference(parabolic_path(), TIMES)
    classification = chazy_classify(trajectory)

    assert classification.label is Regime.PARABOLIC
    for pair, exponent in classification.pair_exponents.items():
        assert exponent == pytest.approx(2 / 3)
        assert classification.local_exponents[pair] == pytest.approx(2 / 3)


def test_hyperbolic_parabolic():

    classification = chazy_classify(hp_trajectory())
    exponents = classification.pair_exponents

    assert classification.label is Regime.HYPERBOLIC_PARABOLIC
    assert exponents[(0, 1)] == pytest.approx(2 / 3, abs=1e-6)
    assert exponents[(0, 2)] == pytest.approx(1, abs=1e-3)
    assert classification.to_dict()["label"] == "HP"
    assert set(classification.to_dict()["pair_exponents"]) == {
        "0,1",
        "0,2",
        "1,2",
    }


def test_bounded_orbit():
    """ Check a circular orbit is not expansive. """

    with pytest.raises(ClassificationError) as error:
        chazy_classify(circular_trajectory())

    assert error.value.reason == "potential"


def test_cluster_center_drift():
    """ Check the barycenter of each cluster follows its velocity. """

    trajectory = hp_trajectory()
    a = Configuration([[5, 0], [5, 0], [-10, 0]], trajectory.system)
    partition = cluster_partition(a)

    drift = cluster_center_drift(trajectory, partition)

    assert drift.shape == (2, len(trajectory))
    assert np.allclose(drift, 0, atol=1e-6)
