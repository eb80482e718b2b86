""" Tests for the command-line interface. """
import json

import numpy as np
import pytest

from expansive import MassSystem, PotentialModel, __version__
from expansive.algorithms.central_configuration import (
    find_central_configuration,
)
from expansive.cli import (
    EXIT_CONVERGENCE,
    EXIT_OK,
    EXIT_VALIDATION,
    EXIT_VERIFICATION,
    config_hash,
    main,
    workers_from_environment,
)
from expansive.trajectory import Trajectory

TWO_BODY = {"alpha": 1.0, "masses": [1.0, 1.0], "dim": 2}


def write(path, payload):

    path.write_text(json.dumps(payload))
    return str(path)


def read(path):

    return json.loads(path.read_text())


def test_central_config(tmp_path):
    """Check the two-body configuration at unit alpha and the manifest
    written next to it."""

    config = write(tmp_path / "config.json", TWO_BODY)
    out = tmp_path / "out"

    assert main(["central-config", "--config", config, "--out", str(out)]) == 0

    central = read(out / "central_config.json")
    assert central["u_min"] == pytest.approx(2 ** -0.5, rel=1e-8)
    assert central["beta"] == pytest.approx(1.4713, abs=1e-4)
    assert central["converged"]

    manifest = read(out / "manifest.json")
    assert manifest["command"] == "central-config"
    assert manifest["seed"] == 0
    assert manifest["tool_version"] == __version__
    assert manifest["exit_code"] == EXIT_OK
    assert manifest["wall_time_s"] >= 0
    assert len(manifest["config_hash"]) == 64
    assert manifest["defaults"]["starts"] > 0


def test_central_config_deterministic(tmp_path):

    config = write(tmp_path / "config.json", TWO_BODY)
    outputs, hashes = [], []
    for name in ("first", "second"):
        out = tmp_path / name
        main(["central-config", "--config", config, "--seed", "3",
              "--out", str(out)])
        outputs.append((out / "central_config.json").read_bytes())
        hashes.append(read(out / "manifest.json")["config_hash"])

    assert outputs[0] == outputs[1]
    assert hashes[0] == hashes[1]


def test_central_config_parabolic_range(tmp_path):
    """ Check parabolic mode refuses ``alpha`` outside ``(0, 2)``. """

    config = write(tmp_path / "config.json", dict(TWO_BODY, alpha=2.5))
    out = tmp_path / "out"
    status = main(
        ["central-config", "--config", config, "--mode", "parabolic",
         "--out", str(out)]
    )

    assert status == EXIT_VALIDATION
    assert not (out / "central_config.json").exists()
    assert read(out / "manifest.json")["exit_code"] == EXIT_VALIDATION

    beta = tmp_path / "beta"
    assert main(["central-config", "--config", config, "--out", str(beta)]) == 0
    assert read(beta / "central_config.json")["beta"] is None


def test_central_config_not_converged(tmp_path):
    """ Check an unreachable tolerance keeps the best configuration. """

    config = write(tmp_path / "config.json", TWO_BODY)
    out = tmp_path / "out"
    status = main(
        ["central-config", "--config", config, "--tol", "0", "--out", str(out)]
    )

    assert status == EXIT_CONVERGENCE
    assert not read(out / "central_config.json")["converged"]


def test_missing_input(tmp_path):

    out = tmp_path / "out"
    status = main(
        ["central-config", "--config", str(tmp_path / "none.json"),
         "--out", str(out)]
    )

    assert status == EXIT_VALIDATION
    assert (out / "manifest.json").exists()


def test_gamma(tmp_path):

    config = write(
        tmp_path / "config.json",
        dict(TWO_BODY, alpha=2.0, a=[[1, 0], [-1, 0]]),
    )
    out = tmp_path / "out"

    assert main(["gamma", "--config", config, "--out", str(out)]) == 0

    gamma = read(out / "gamma.json")
    assert gamma["alpha"] == 2
    assert np.allclose(np.ravel(gamma["gammas"][0]), [-0.125, 0, 0.125, 0])


def test_synthesize(tmp_path, capsys):

    initial = write(
        tmp_path / "initial.json",
        {"masses": [1, 1], "dim": 2, "positions": [[0, 0.5], [0, -0.5]]},
    )
    target = write(
        tmp_path / "target.json",
        {"masses": [1, 1], "dim": 2, "a": [[1, 0], [-1, 0]]},
    )
    out = tmp_path / "out"
    status = main(
        ["synthesize", "--mode", "hyperbolic", "--alpha", "1.5",
         "--initial", initial, "--target", target, "--horizon", "100",
         "--nodes", "100", "--out", str(out)]
    )

    assert status == EXIT_OK
    assert "energy=" in capsys.readouterr().out

    report = read(out / "report.json")
    trajectory = Trajectory.load(out / "trajectory.csv")
    assert report["converged"]
    assert report["nodes"] == 101
    assert len(trajectory) == 101
    assert trajectory.metadata["regime"] == "H"


def test_synthesize_needs_target(tmp_path):

    initial = write(
        tmp_path / "initial.json",
        {"masses": [1, 1], "dim": 2, "positions": [[0, 0.5], [0, -0.5]]},
    )
    out = tmp_path / "out"
    status = main(
        ["synthesize", "--mode", "hp", "--alpha", "1.5", "--initial",
         initial, "--out", str(out)]
    )

    assert status == EXIT_VALIDATION


def test_integrate_and_verify_bounded_orbit(tmp_path):
    """Check a circular orbit integrates with small drift and then fails
    verification as not expansive."""

    state = write(
        tmp_path / "state.json",
        dict(
            TWO_BODY,
            positions=[[1, 0], [-1, 0]],
            velocities=[[0, 0.5], [0, -0.5]],
        ),
    )
    out = tmp_path / "out"

    assert main(
        ["integrate", "--state", state, "--t1", "200", "--out", str(out)]
    ) == EXIT_OK

    summary = read(out / "summary.json")
    assert summary["energy"] == pytest.approx(-0.25)
    assert summary["energy_drift"] <= 1e-8
    assert summary["samples"] == 1000

    check = tmp_path / "check"
    status = main(
        ["verify", "--traj", str(out / "trajectory.csv"), "--out", str(check)]
    )

    assert status == EXIT_VERIFICATION
    assert read(check / "verification.json")["passed"] is False


def test_verify_homothetic(tmp_path, capsys):
    """ Check a saved homothetic motion passes its own checks. """

    model = PotentialModel(1.0, MassSystem([1.0, 1.0]))
    central = find_central_configuration(model, seed=0)
    trajectory = Trajectory.from_reference(
        central.homothetic_path(), np.geomspace(1, 1e4, 300)
    )
    trajectory.metadata["central"] = central.to_dict()
    trajectory.save(tmp_path / "trajectory.csv")

    out = tmp_path / "out"
    status = main(
        ["verify", "--traj", str(tmp_path / "trajectory.csv"), "--expect",
         "parabolic", "--out", str(out)]
    )

    verification = read(out / "verification.json")
    assert status == EXIT_OK
    assert verification["passed"]
    assert verification["checks"][0]["label"] == "P"
    assert "classification: pass" in capsys.readouterr().out


def test_config_hash():

    assert config_hash({"a": 1, "b": [1, 2]}) == config_hash(
        {"b": [1, 2], "a": 1}
    )
    assert config_hash({"a": 1}) != config_hash({"a": 2})


def test_workers_from_environment(monkeypatch):

    monkeypatch.delenv("NBODY_THREADS", raising=False)
    assert workers_from_environment() == 1

    monkeypatch.setenv("NBODY_THREADS", "4")
    assert workers_from_environment() == 4

    monkeypatch.setenv("NBODY_THREADS", "many")
    with pytest.raises(ValueError):
        workers_from_environment()


def test_version(capsys):

    with pytest.raises(SystemExit):
        main(["--version"])

    assert __version__ in capsys.readouterr().out
