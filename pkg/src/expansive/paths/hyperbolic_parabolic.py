""" The hyperbolic-parabolic reference path. """
import numpy as np

from expansive.algorithms.central_configuration import (
    cluster_partition,
    clustered_central_configuration,
)
from expansive.base import BaseReferencePath, Regime
from expansive.exceptions import DomainError
from expansive.paths.parabolic import parabolic_terms


class HyperbolicParabolicPath(BaseReferencePath):
    """The path ``r_0(t) = a t + beta b_m t^(2 / (2 + alpha))`` where the
    bodies sharing an asymptotic velocity form clusters, each moving on the
    homothetic solution of its own central configuration.

    Parameters
    ----------
    model : PotentialModel
    a : Configuration
        The asymptotic velocity. Must be non-zero; collisions between its
        entries define the clusters.
    clustered : ClusteredCentralConfiguration or None
        Precomputed cluster configurations. Found from ``a`` when ``None``.
    eps_cluster : float or None
        Threshold passed to ``cluster_partition``.
    **kwargs
        Passed to ``clustered_central_configuration``.

    Attributes
    ----------
    partition : ClusterPartition
    shape : np.ndarray
        The per-body ``beta^K b^K`` block vector.
    """

    def __init__(self, model, a, clustered=None, eps_cluster=None, **kwargs):

        super().__init__(model, Regime.HYPERBOLIC_PARABOLIC)
        self._check_alpha_range(0.5, 2)

        if a.system != model.system:
            raise DomainError(message="a does not belong to the system.")
        if not np.any(a.coords):
            raise DomainError(
                a=a,
                message="a = 0 gives a purely parabolic motion; use a "
                "parabolic path instead.",
            )

        self.a = a
        if clustered is None:
            partition = cluster_partition(a, eps_cluster)
            clustered = clustered_central_configuration(
                model, partition, **kwargs
            )

        self.clustered = clustered
        self.partition = clustered.partition
        self.shape = clustered.shape
        self.parabolic_blocks = [
            (beta, None if central is None else central.b_m)
            for central, beta in clustered.blocks
        ]

    def _evaluate(self, times):

        t = times[:, None, None]
        a = self.a.coords
        position, velocity, acceleration = parabolic_terms(
            self.shape, self.exponent, times
        )
        return position + a * t, velocity + a, acceleration
