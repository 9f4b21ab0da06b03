"""Voronoi compatibility of a clustering: pairwise linear separability.

A clustering is compatible with some Voronoi partition of R^d exactly when
every pair of clusters can be separated by a hyperplane.  Each pair is
tested by a hard-margin feasibility LP (maximise the margin under a
sup-norm bound on the normal); a pair passes when the optimal margin
exceeds a small tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .errors import DegenerateClusterError
from .types import Clustering, DataSet

MARGIN_TOL = 1e-7


@dataclass(frozen=True)
class VoronoiReport:
    pair_separable: dict[tuple[int, int], bool]
    margins: dict[tuple[int, int], float]

    @property
    def all_separable(self) -> bool:
        return all(self.pair_separable.values())


def _separation_margin(a: np.ndarray, b: np.ndarray) -> float:
    """Best margin m for w.a + c >= m on A, w.b + c <= -m on B, |w|_inf <= 1."""
    d = a.shape[1]
    # variables: w (d), c, m ; maximise m
    na, nb = a.shape[0], b.shape[0]
    a_ub = np.zeros((na + nb, d + 2))
    a_ub[:na, :d] = -a
    a_ub[:na, d] = -1.0
    a_ub[:na, d + 1] = 1.0
    a_ub[na:, :d] = b
    a_ub[na:, d] = 1.0
    a_ub[na:, d + 1] = 1.0
    b_ub = np.zeros(na + nb)
    cost = np.zeros(d + 2)
    cost[d + 1] = -1.0
    bounds = [(-1.0, 1.0)] * d + [(None, None), (0.0, 1.0)]
    res = linprog(cost, A_ub=a_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if res.status != 0:
        return 0.0
    return float(-res.fun)


def check_voronoi_compatibility(dataset: DataSet, clustering: Clustering) -> VoronoiReport:
    """Per-pair separability report for all cluster pairs k < l.

    Degenerate pairs (coincident points across the two clusters) come back
    as non-separable rather than raising.
    """
    for k, members in enumerate(clustering.clusters):
        if not members:
            raise DegenerateClusterError(f"cluster {k} is empty")
    separable: dict[tuple[int, int], bool] = {}
    margins: dict[tuple[int, int], float] = {}
    for k in range(clustering.k):
        for l in range(k + 1, clustering.k):
            a = dataset.points[list(clustering.clusters[k])]
            b = dataset.points[list(clustering.clusters[l])]
            m = _separation_margin(a, b)
            margins[(k, l)] = m
            separable[(k, l)] = m > MARGIN_TOL
    return VoronoiReport(separable, margins)
