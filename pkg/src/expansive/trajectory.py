""" Sampled motions and their persistence as CSV with a JSON sidecar. """
import enum
import json
import pathlib

import numpy as np

from expansive.exceptions import DimensionError, DomainError
from expansive.system import MassSystem


class Provenance(enum.Enum):
    """ How a trajectory was produced. """

    MINIMIZED = "minimized"
    INTEGRATED = "integrated"
    REFERENCE = "reference"


class Trajectory:
    """A motion sampled at increasing times ``t >= 1``.

    Parameters
    ----------
    times : array-like
        Strictly increasing sample times, the first at least one.
    positions, velocities : array-like
        Arrays of shape ``(K, N, d)`` or ``(K, dN)``.
    system : MassSystem
    alpha : float
    provenance : Provenance or str
    energy : float or None
        The (terminal) energy, when known.
    metadata : dict or None
        Extra JSON-serialisable information saved in the sidecar.

    Attributes
    ----------
    energy_drift : float or None
        The relative energy drift of an integrated trajectory.
    """

    def __init__(
        self,
        times,
        positions,
        velocities,
        system,
        alpha,
        provenance,
        energy=None,
        metadata=None,
    ):

        times = np.asarray(times, dtype=float)
        positions = system.coords(positions)
        velocities = system.coords(velocities)
        if times.ndim != 1 or positions.shape[0] != times.size:
            raise DimensionError(
                times=times.shape,
                positions=positions.shape,
                message="One position per sample time.",
            )
        if velocities.shape != positions.shape:
            raise DimensionError(
                positions=positions.shape, velocities=velocities.shape
            )
        if times[0] < 1 or np.any(np.diff(times) <= 0):
            raise DomainError(
                message="Times must increase strictly from t >= 1."
            )

        self.times = times
        self.positions = np.array(positions)
        self.velocities = np.array(velocities)
        self.system = system
        self.alpha = float(alpha)
        self.provenance = Provenance(provenance)
        self.energy = None if energy is None else float(energy)
        self.metadata = dict(metadata or {})
        self.energy_drift = None

    def __repr__(self):

        return (
            f"Trajectory(provenance={self.provenance.value}, "
            f"samples={len(self)}, span=[{self.times[0]}, {self.times[-1]}])"
        )

    def __len__(self):

        return self.times.size

    @classmethod
    def from_reference(cls, path, times):
        """ Sample a reference path as a trajectory. """

        times = np.asarray(times, dtype=float)
        position, velocity, _ = path.state(times)
        metadata = {"regime": path.regime.value}
        if path.a is not None:
            metadata["a"] = path.a.coords.tolist()

        trajectory = cls(
            times,
            position,
            velocity,
            path.system,
            path.alpha,
            Provenance.REFERENCE,
            metadata=metadata,
        )
        trajectory.energy = float(
            total_energies(path.model, position, velocity)[-1]
        )
        return trajectory

    def energies(self, model):
        """ The energy ``1/2 |v|_M^2 - U(x)`` at every sample. """

        return total_energies(model, self.positions, self.velocities)

    def restrict(self, t_min=None, t_max=None):
        """ Return the samples with ``t_min <= t <= t_max``. """

        keep = np.ones(len(self), dtype=bool)
        if t_min is not None:
            keep &= self.times >= t_min
        if t_max is not None:
            keep &= self.times <= t_max

        return Trajectory(
            self.times[keep],
            self.positions[keep],
            self.velocities[keep],
            self.system,
            self.alpha,
            self.provenance,
            self.energy,
            self.metadata,
        )

    def header(self):

        n, d = self.system.n_bodies, self.system.dim
        labels = [f"{i}_{k}" for i in range(1, n + 1) for k in range(1, d + 1)]
        return ",".join(
            ["t"] + [f"x_{label}" for label in labels]
            + [f"v_{label}" for label in labels]
        )

    def save(self, path):
        """Write the samples to ``path`` as CSV with the header
        ``t,x_1_1,...,v_N_d`` and the metadata to ``path`` with a ``.json``
        suffix."""

        path = pathlib.Path(path)
        size = self.system.size
        table = np.column_stack(
            [
                self.times,
                self.positions.reshape(-1, size),
                self.velocities.reshape(-1, size),
            ]
        )
        np.savetxt(
            path, table, fmt="%.17g", delimiter=",", header=self.header(),
            comments="",
        )

        sidecar = {
            "alpha": self.alpha,
            "masses": self.system.masses.tolist(),
            "dim": self.system.dim,
            "provenance": self.provenance.value,
            "energy": self.energy,
            "energy_drift": self.energy_drift,
            "metadata": self.metadata,
        }
        path.with_suffix(".json").write_text(json.dumps(sidecar, indent=2))

    @classmethod
    def load(cls, path):
        """ Read a trajectory written by ``save``. """

        path = pathlib.Path(path)
        sidecar = json.loads(path.with_suffix(".json").read_text())
        system = MassSystem(sidecar["masses"], sidecar["dim"])

        table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        size = system.size
        if table.shape[1] != 1 + 2 * size:
            raise DimensionError(
                columns=table.shape[1], expected=1 + 2 * size
            )

        trajectory = cls(
            table[:, 0],
            table[:, 1 : 1 + size],
            table[:, 1 + size :],
            system,
            sidecar["alpha"],
            sidecar["provenance"],
            sidecar.get("energy"),
            sidecar.get("metadata"),
        )
        trajectory.energy_drift = sidecar.get("energy_drift")
        return trajectory


def total_energies(model, positions, velocities):
    """ The energy at each of a batch of states. """

    kinetic = 0.5 * model.system.inner(velocities, velocities)
    return kinetic - model.energy(positions)


def velocity_defect(trajectory, a):
    """ The series ``|v(t) - a|_M`` measuring the approach to ``a``. """

    system = trajectory.system
    a = system.coords(a)
    return system.norm(trajectory.velocities - a)
