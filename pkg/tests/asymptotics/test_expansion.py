""" Tests for expansions and the remainder fits against them. """
import json

import numpy as np
import pytest

from expansive import Regime
from expansive.asymptotics import (
    ExpansionSpec,
    ExpansionTerm,
    expansion_check,
    expansion_residual,
    remainder_bound,
)
from expansive.trajectory import Trajectory

from .util import (
    SYSTEM,
    TIMES,
    VELOCITY,
    hyperbolic_path,
    parabolic_path,
    synthetic_trajectory,
)

CONSTANT = np.array([[0.3, -0.1], [0.0, 0.2], [-0.3, -0.1]])
SHAPE = np.array([[1.0, 0.0], [-0.5, 0.8], [-0.5, -0.8]])


@pytest.mark.parametrize(
    "regime, alpha, delta",
    (
        ("P", 1.0, 1 / 3),
        ("HP", 0.6, 0.4),
        ("HP", 1.5, 1.5 / 3.5),
        ("H", 1.5, -0.5),
        ("H", 1.0, 0.0),
        ("H", 0.75, 0.0),
        ("H", 0.3, 0.4),
        ("H", 0.2, 0.4),
    ),
)
def test_remainder_bound(regime, alpha, delta):

    assert remainder_bound(regime, alpha) == pytest.approx(delta)


@pytest.mark.parametrize(
    "alpha, names, constant",
    (
        (1.5, ["linear", "gamma_1"], True),
        (1.0, ["linear", "log"], True),
        (0.75, ["linear", "gamma_1", "gamma_2"], True),
        (0.3, ["linear", "gamma_1", "gamma_2"], False),
    ),
)
def test_hyperbolic_spec(alpha, names, constant):
    """ Check the terms of the hyperbolic expansion. """

    spec = ExpansionSpec.from_path(hyperbolic_path(alpha))

    assert spec.regime is Regime.HYPERBOLIC
    assert [term.name for term in spec.terms] == names
    assert spec.constant is constant
    assert spec.remainder_exponent == pytest.approx(
        remainder_bound("H", alpha)
    )
    assert np.allclose(spec.terms[0].coefficient, VELOCITY)
    for k, term in enumerate(spec.terms[1:], start=1):
        if not term.log:
            assert term.exponent == pytest.approx(1 - k * alpha)


def test_log_term_unit_alpha():
    """ Check the log coefficient is ``-M^{-1} grad U(a)`` at ``alpha = 1``. """

    path = hyperbolic_path(1.0)
    spec = ExpansionSpec.from_path(path)
    log_term = spec.terms[1]

    assert log_term.log
    assert np.allclose(
        log_term.coefficient,
        -path.model.gradient(VELOCITY) / SYSTEM.masses[:, None],
    )


def test_parabolic_spec():

    path = parabolic_path()
    spec = ExpansionSpec.from_path(path)

    assert spec.regime is Regime.PARABOLIC
    assert not spec.constant
    assert [term.name for term in spec.terms] == ["parabolic"]
    assert spec.terms[0].exponent == pytest.approx(2 / 3)
    assert np.allclose(spec.terms[0].coefficient, path.shape)


def test_spec_dict():

    spec = ExpansionSpec.from_path(hyperbolic_path(0.75))
    data = json.loads(json.dumps(spec.to_dict()))
    loaded = ExpansionSpec.from_dict(data)

    assert loaded.to_dict() == spec.to_dict()
    assert loaded.regime is spec.regime


def test_reference_residual_at_noise_level():
    """ Check a reference trajectory leaves nothing to fit. """

    path = hyperbolic_path(1.5)
    trajectory = Trajectory.from_reference(path, TIMES)
    spec = ExpansionSpec.from_path(path)

    residual = expansion_check(trajectory, spec)

    assert residual.fit is None
    assert residual.rejected
    assert np.allclose(residual.fitted["constant"], 0, atol=1e-8)


def test_hyperbolic_first_correction():
    """Check the remainder after ``a t`` and a constant is the first
    correction."""

    spec = ExpansionSpec.from_path(hyperbolic_path(1.5))
    correction = 2 * SHAPE
    trajectory = synthetic_trajectory(
        [(VELOCITY, 1.0), (CONSTANT, 0.0), (correction, -0.5)], 1.5
    )

    residual = expansion_check(trajectory, spec)

    assert residual.fit.exponent == pytest.approx(-0.5, abs=1e-6)
    assert residual.fit.bound == pytest.approx(-0.5)
    assert residual.fit.passed
    assert np.allclose(residual.fitted["constant"], CONSTANT)
    assert np.allclose(residual.fitted["gamma_1"], correction)
    assert not residual.rejected


def test_log_coefficient_refitted():
    """Check the log coefficient and the constant are fitted jointly from
    the data."""

    spec = ExpansionSpec.from_path(hyperbolic_path(1.0))
    log_coefficient = 0.5 * SHAPE
    trajectory = synthetic_trajectory(
        [(VELOCITY, 1.0), (log_coefficient, "log"), (CONSTANT, 0.0)], 1.0
    )

    residual = expansion_check(trajectory, spec)

    assert residual.fit is None
    assert np.allclose(residual.fitted["log"], log_coefficient)
    assert np.allclose(residual.fitted["constant"], CONSTANT)
    assert residual.conditioning > 1


@pytest.mark.parametrize("exponent, passed", ((0.2, True), (0.5, False)))
def test_parabolic_remainder(exponent, passed):

    spec = ExpansionSpec(
        "P", 1.0, [ExpansionTerm("parabolic", SHAPE, 2 / 3)], 1 / 3, False
    )
    trajectory = synthetic_trajectory(
        [(SHAPE, 2 / 3), (CONSTANT, exponent)], 1.0
    )

    residual = expansion_check(trajectory, spec)

    assert residual.fitted == {}
    assert residual.fit.exponent == pytest.approx(exponent)
    assert residual.fit.passed is passed


def test_partial_order():
    """ Check ``order`` subtracts only the leading terms. """

    spec = ExpansionSpec(
        "P", 1.0, [ExpansionTerm("parabolic", SHAPE, 2 / 3)], 1 / 3, False
    )
    trajectory = synthetic_trajectory([(SHAPE, 2 / 3)], 1.0)

    residual = expansion_residual(trajectory, spec, order=0)

    assert np.allclose(residual.fitted["parabolic"], SHAPE)
    assert residual.fit.exponent == pytest.approx(2 / 3)
    assert np.allclose(residual.to_dict()["fitted"]["parabolic"], SHAPE)


@pytest.mark.parametrize("exponent, passed", ((0.2, True), (0.55, False)))
def test_small_alpha_full_expansion(exponent, passed):
    """Check every term is subtracted below ``alpha = 1/2`` and the
    remainder is held to ``t^(1 - P alpha)``."""

    spec = ExpansionSpec.from_path(hyperbolic_path(0.3))
    terms = [(term.coefficient, term.exponent) for term in spec.terms]
    trajectory = synthetic_trajectory(terms + [(CONSTANT, exponent)], 0.3)

    residual = expansion_check(trajectory, spec)

    assert residual.fitted == {}
    assert residual.fit.bound == pytest.approx(0.4)
    assert residual.fit.exponent == pytest.approx(exponent)
    assert residual.fit.passed is passed


@pytest.mark.parametrize("alpha", (1.5, 1.0, 0.5))
def test_coefficient_errors_vanish(alpha):
    """Check a trajectory built from the computed coefficients fits them
    back exactly."""

    spec = ExpansionSpec.from_path(hyperbolic_path(alpha))
    terms = [
        (term.coefficient, "log" if term.log else term.exponent)
        for term in spec.terms
    ]
    trajectory = synthetic_trajectory(terms + [(CONSTANT, 0.0)], alpha)

    residual = expansion_check(trajectory, spec)
    expected = {"gamma_1"} if alpha > 1 else {"log"}

    assert set(residual.coefficient_errors) == expected
    for error in residual.coefficient_errors.values():
        assert error == pytest.approx(0, abs=1e-6)
    assert residual.to_dict()["coefficient_errors"] == (
        residual.coefficient_errors
    )


def test_coefficient_error_of_wrong_log():

    spec = ExpansionSpec.from_path(hyperbolic_path(1.0))
    log_term = spec.terms[1].coefficient
    trajectory = synthetic_trajectory(
        [(VELOCITY, 1.0), (2 * log_term, "log"), (CONSTANT, 0.0)], 1.0
    )

    residual = expansion_check(trajectory, spec)

    assert residual.coefficient_errors["log"] == pytest.approx(1, rel=1e-6)
