""" The ``expansive`` command-line interface. """
import argparse
import hashlib
import json
import logging
import os
import sys
import time
from pathlib import Path

import numpy as np

from expansive import __version__
from expansive.action import DEFAULT_HORIZON, DEFAULT_NODES, TAIL_MODES
from expansive.algorithms.central_configuration import (
    DEFAULT_STARTS,
    MAX_ITERS as CC_MAX_ITERS,
    TOL_CC,
    CentralConfiguration,
    find_central_configuration,
)
from expansive.algorithms.gamma import gamma_coefficients
from expansive.algorithms.integrate import RTOL, integrate_newton
from expansive.algorithms.minimize import MAX_ITERS, OPT_TOL
from expansive.asymptotics import FIT_MARGIN, ExpansionSpec, verify_trajectory
from expansive.base import Regime
from expansive.exceptions import (
    ClassificationError,
    CollisionGuardError,
    ConvergenceError,
    DimensionError,
    DomainError,
    SingularityError,
)
from expansive.motions import (
    HyperbolicMotion,
    HyperbolicParabolicMotion,
    ParabolicMotion,
)
from expansive.paths import HyperbolicParabolicPath, HyperbolicPath
from expansive.potential import PotentialModel
from expansive.system import Configuration, MassSystem
from expansive.trajectory import Trajectory

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CONVERGENCE = 3
EXIT_SINGULARITY = 4
EXIT_VERIFICATION = 5

MODES = {
    "hyperbolic": Regime.HYPERBOLIC,
    "parabolic": Regime.PARABOLIC,
    "hp": Regime.HYPERBOLIC_PARABOLIC,
}


class RunManifest:
    """The provenance record written next to every output.

    Parameters
    ----------
    command : str
    config : dict
        The inputs and effective parameters of the run. Only its hash is
        recorded.
    seed : int or None
    defaults : dict
        The effective tolerances and sizes.
    """

    def __init__(self, command, config, seed=None, defaults=None):

        self.command = command
        self.config_hash = config_hash(config)
        self.seed = seed
        self.tool_version = __version__
        self.defaults = defaults or {}
        self.wall_time_s = None
        self.exit_code = None
        self._started = time.perf_counter()

    def finish(self, exit_code):

        self.exit_code = exit_code
        self.wall_time_s = time.perf_counter() - self._started

    def to_dict(self):

        return {
            "command": self.command,
            "config_hash": self.config_hash,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "wall_time_s": self.wall_time_s,
            "defaults": self.defaults,
            "exit_code": self.exit_code,
        }


def config_hash(config):
    """ The SHA-256 digest of the canonical JSON form of ``config``. """

    canonical = json.dumps(
        config, sort_keys=True, separators=(",", ":"), default=_jsonable
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def exit_code(error):
    """ The exit status a library error maps to. """

    if isinstance(error, (SingularityError, CollisionGuardError)):
        return EXIT_SINGULARITY
    if isinstance(error, ConvergenceError):
        return EXIT_CONVERGENCE
    if isinstance(error, ClassificationError):
        return EXIT_VERIFICATION
    if isinstance(error, (DomainError, DimensionError, ValueError, OSError)):
        return EXIT_VALIDATION
    raise error


def workers_from_environment():
    """ The thread cap set by ``NBODY_THREADS``; one when unset. """

    raw = os.environ.get("NBODY_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise DomainError(
            NBODY_THREADS=raw, message="NBODY_THREADS must be an integer."
        )


def _jsonable(value):

    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (Regime,)):
        return value.value
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not JSON serialisable.")


def _write_json_file(path, payload):

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True, default=_jsonable)
        handle.write("\n")


def _read_json_file(path):

    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as error:
        raise DomainError(path=str(path), message=str(error)) from error


def _model(alpha, data):

    system = MassSystem(data["masses"], data.get("dim", 2))
    return PotentialModel(alpha, system)


def _velocity(data, system):
    """Read an asymptotic velocity stored under ``a`` or, in the plain
    configuration schema, under ``positions``."""

    key = "a" if "a" in data else "positions"
    velocity = Configuration.from_dict(data, key=key)
    if velocity.system != system:
        raise DomainError(message="The velocity belongs to another system.")
    return velocity


def _cmd_central_config(args, workers):

    data = _read_json_file(args.config)
    alpha = data["alpha"] if args.alpha is None else args.alpha
    model = _model(alpha, data)
    if args.mode == "parabolic" and not 0 < model.alpha < 2:
        raise DomainError(
            alpha=model.alpha, message="Parabolic mode needs alpha in (0, 2)."
        )

    status = EXIT_OK
    try:
        central = find_central_configuration(
            model,
            seed=args.seed,
            tol_cc=args.tol,
            starts=args.starts,
            max_iters=args.max_iters,
            workers=workers,
        )
    except ConvergenceError as error:
        if error.best is None:
            raise
        central, status = error.best, EXIT_CONVERGENCE

    _write_json_file(args.out / "central_config.json", central.to_dict())
    return status


def _cmd_gamma(args, workers):

    data = _read_json_file(args.config)
    alpha = data["alpha"] if args.alpha is None else args.alpha
    model = _model(alpha, data)
    velocity = _velocity(data, model.system)
    gamma = gamma_coefficients(model, velocity, args.order)

    _write_json_file(args.out / "gamma.json", gamma.to_dict())
    return EXIT_OK


def _cmd_synthesize(args, workers):

    regime = MODES[args.mode]
    initial = _read_json_file(args.initial)
    target = None if args.target is None else _read_json_file(args.target)
    bm = None if args.bm is None else _read_json_file(args.bm)

    model = _model(args.alpha, initial)
    x0 = Configuration.from_dict(initial)
    options = {
        "horizon": args.horizon,
        "n_intervals": args.nodes,
        "tail_mode": args.tail_mode,
    }

    if regime is Regime.PARABOLIC:
        central = None
        if bm is not None:
            central = CentralConfiguration.from_dict(bm)
            if central.alpha != model.alpha:
                raise DomainError(
                    alpha=central.alpha,
                    message="The central configuration is for another alpha.",
                )
        motion = ParabolicMotion(
            model, x0, central, seed=args.seed, workers=workers, **options
        )
    else:
        if target is None:
            raise DomainError(mode=args.mode, message="--target is required.")
        a = _velocity(target, model.system)
        if regime is Regime.HYPERBOLIC:
            motion = HyperbolicMotion(model, x0, a, **options)
        else:
            motion = HyperbolicParabolicMotion(
                model, x0, a, seed=args.seed, workers=workers, **options
            )

    motion.solve(args.opt_tol, args.max_iters)
    report = motion.report
    report.trajectory.save(args.out / "trajectory.csv")
    _write_json_file(args.out / "report.json", report.to_dict())

    print(
        f"energy={report.energy:.12g} el_residual={report.el_residual:.3e} "
        f"converged={report.converged}"
    )
    status = EXIT_OK if report.converged else EXIT_CONVERGENCE
    return status


def _cmd_integrate(args, workers):

    state = _read_json_file(args.state)
    alpha = state.get("alpha") if args.alpha is None else args.alpha
    if alpha is None:
        raise DomainError(message="Give --alpha or an alpha in the state.")

    model = _model(alpha, state)
    x0 = Configuration.from_dict(state)
    v0 = Configuration.from_dict(state, key="velocities")

    trajectory = integrate_newton(
        model,
        x0,
        v0,
        t0=args.t0,
        t1=args.t1,
        rtol=args.rtol,
        n_samples=args.samples,
        spacing=args.spacing,
    )
    trajectory.save(args.out / "trajectory.csv")
    _write_json_file(
        args.out / "summary.json",
        {
            "energy": trajectory.energy,
            "energy_drift": trajectory.energy_drift,
            "samples": len(trajectory),
            "t1": float(trajectory.times[-1]),
        },
    )

    print(
        f"energy={trajectory.energy:.12g} "
        f"drift={trajectory.energy_drift:.3e}"
    )
    return EXIT_OK


def path_from_metadata(trajectory, seed=0, workers=1):
    """Rebuild the reference path a synthesised trajectory was built around
    from its sidecar metadata. ``None`` when the metadata names no regime."""

    metadata = trajectory.metadata
    regime = metadata.get("regime")
    if regime is None:
        return None

    model = PotentialModel(trajectory.alpha, trajectory.system)
    regime = Regime(regime)
    if regime is Regime.PARABOLIC:
        central = metadata.get("central")
        if central is not None:
            central = CentralConfiguration.from_dict(central)
        else:
            central = find_central_configuration(
                model, seed=seed, workers=workers
            )
        return central.homothetic_path()

    a = Configuration(metadata["a"], trajectory.system)
    if regime is Regime.HYPERBOLIC:
        return HyperbolicPath(model, a)

    path = HyperbolicParabolicPath(model, a, seed=seed, workers=workers)
    if path.partition.is_trivial:
        return HyperbolicPath(model, a)
    return path


def _cmd_verify(args, workers):

    spec = None if args.spec == "auto" else _read_json_file(args.spec)
    trajectory = Trajectory.load(args.traj)
    expected = None if args.expect is None else MODES[args.expect]
    if spec is None:
        path = path_from_metadata(trajectory, args.seed, workers)
    else:
        path, spec = None, ExpansionSpec.from_dict(spec)

    try:
        report = verify_trajectory(
            trajectory, path, spec, expected, args.margin
        )
    except ClassificationError as error:
        _write_json_file(
            args.out / "verification.json",
            {"passed": False, "error": error.message},
        )
        raise

    _write_json_file(args.out / "verification.json", report.to_dict())
    for check in report.checks:
        print(f"{check['name']}: {'pass' if check['pass'] else 'FAIL'}")

    return EXIT_OK if report.passed else EXIT_VERIFICATION


INPUT_FLAGS = ("config", "initial", "target", "bm", "state", "traj", "spec")
IGNORED_FLAGS = ("command", "verbose", "out")


def run_manifest(args):
    """Build the manifest of a parsed command line. The configuration
    hashed is every flag but the output location and verbosity, with input
    files replaced by their contents."""

    config, defaults = {"command": args.command}, {}
    for flag, value in sorted(vars(args).items()):
        if flag in IGNORED_FLAGS:
            continue
        if flag in INPUT_FLAGS:
            if value is not None and value != "auto":
                try:
                    value = hashlib.sha256(Path(value).read_bytes()).hexdigest()
                except OSError as error:
                    raise DomainError(
                        path=value, message=str(error)
                    ) from error
            config[flag] = value
        else:
            config[flag] = defaults[flag] = value

    return RunManifest(
        args.command, config, getattr(args, "seed", None), defaults
    )


def _add_output(parser):

    parser.add_argument(
        "--out", type=Path, required=True, help="The output directory."
    )


def _build_parser():

    parser = argparse.ArgumentParser(
        prog="expansive",
        description="Construct, synthesise, integrate and verify expansive "
        "motions of the N-body problem with homogeneous potentials.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="INFO logging; give twice for DEBUG.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    central = subparsers.add_parser(
        "central-config", help="Find a minimal central configuration."
    )
    central.add_argument(
        "--config", required=True, help="JSON with alpha, masses and dim."
    )
    central.add_argument("--alpha", type=float, default=None)
    central.add_argument("--seed", type=int, default=0)
    central.add_argument("--starts", type=int, default=DEFAULT_STARTS)
    central.add_argument("--tol", type=float, default=TOL_CC)
    central.add_argument("--max-iters", type=int, default=CC_MAX_ITERS)
    central.add_argument(
        "--mode",
        choices=("any", "parabolic"),
        default="any",
        help="'parabolic' also checks alpha lies in (0, 2).",
    )
    _add_output(central)

    gamma = subparsers.add_parser(
        "gamma", help="Compute the hyperbolic correction vectors."
    )
    gamma.add_argument(
        "--config", required=True, help="JSON with alpha, masses, dim and a."
    )
    gamma.add_argument("--alpha", type=float, default=None)
    gamma.add_argument("--order", type=int, default=None)
    _add_output(gamma)

    synthesize = subparsers.add_parser(
        "synthesize", help="Synthesise a motion by action minimisation."
    )
    synthesize.add_argument("--mode", choices=sorted(MODES), required=True)
    synthesize.add_argument("--alpha", type=float, required=True)
    synthesize.add_argument(
        "--initial", required=True, help="The initial configuration JSON."
    )
    synthesize.add_argument(
        "--target", default=None, help="The asymptotic velocity JSON."
    )
    synthesize.add_argument(
        "--bm", default=None, help="A central configuration JSON."
    )
    synthesize.add_argument("--horizon", type=float, default=DEFAULT_HORIZON)
    synthesize.add_argument("--nodes", type=int, default=DEFAULT_NODES)
    synthesize.add_argument(
        "--tail-mode", choices=TAIL_MODES, default="truncate"
    )
    synthesize.add_argument("--opt-tol", type=float, default=OPT_TOL)
    synthesize.add_argument("--max-iters", type=int, default=MAX_ITERS)
    synthesize.add_argument("--seed", type=int, default=0)
    _add_output(synthesize)

    integrate = subparsers.add_parser(
        "integrate", help="Integrate Newton's equations from a state."
    )
    integrate.add_argument(
        "--state", required=True, help="JSON with positions and velocities."
    )
    integrate.add_argument("--alpha", type=float, default=None)
    integrate.add_argument("--t0", type=float, default=1.0)
    integrate.add_argument("--t1", type=float, default=100.0)
    integrate.add_argument("--rtol", type=float, default=RTOL)
    integrate.add_argument("--samples", type=int, default=1000)
    integrate.add_argument(
        "--spacing", choices=("geometric", "linear"), default="geometric"
    )
    _add_output(integrate)

    verify = subparsers.add_parser(
        "verify", help="Check the asymptotics of a saved trajectory."
    )
    verify.add_argument("--traj", required=True, help="A trajectory CSV.")
    verify.add_argument(
        "--spec",
        default="auto",
        help="'auto' to rebuild the expansion from the trajectory metadata, "
        "or an expansion JSON.",
    )
    verify.add_argument(
        "--expect",
        choices=sorted(MODES),
        default=None,
        help="The class the trajectory must fall into.",
    )
    verify.add_argument("--margin", type=float, default=FIT_MARGIN)
    verify.add_argument("--seed", type=int, default=0)
    _add_output(verify)

    return parser


COMMANDS = {
    "central-config": _cmd_central_config,
    "gamma": _cmd_gamma,
    "synthesize": _cmd_synthesize,
    "integrate": _cmd_integrate,
    "verify": _cmd_verify,
}


def main(argv=None):
    """Run a subcommand and return its exit status.

    Every command writes its results and ``manifest.json`` to ``--out``.
    Library errors become exit statuses: 2 for invalid input, 3 for
    non-convergence, 4 for collisions and 5 for failed verification.
    """

    parser = _build_parser()
    args = parser.parse_args(argv)

    level = {0: logging.WARNING, 1: logging.INFO}.get(
        args.verbose, logging.DEBUG
    )
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s"
    )

    manifest = None
    try:
        manifest = run_manifest(args)
        workers = workers_from_environment()
        status = COMMANDS[args.command](args, workers)
    except (
        ClassificationError,
        CollisionGuardError,
        ConvergenceError,
        DomainError,
        DimensionError,
        SingularityError,
        KeyError,
        OSError,
        ValueError,
    ) as error:
        if isinstance(error, KeyError):
            error = DomainError(missing=error.args[0])
        status = exit_code(error)
        print(f"error: {error}", file=sys.stderr)

    if manifest is None:
        manifest = RunManifest(args.command, {"argv": argv or sys.argv[1:]})
    manifest.finish(status)
    _write_json_file(args.out / "manifest.json", manifest.to_dict())
    return status


if __name__ == "__main__":
    raise SystemExit(main())
