"""Distances, Gram matrices, cluster costs and centroids.

The squared-distance and Gram matrices are linked by the identity
``D = diag(W) 1' + 1 diag(W)' - 2 W``, which several transforms in
:mod:`cardclust.relaxations` rely on.  Both matrices are exactly symmetric
by construction.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateClusterError
from .types import CardinalitySpec, Clustering, DataSet


def gram_matrix(dataset: DataSet) -> np.ndarray:
    """Pairwise inner products ``W_ij = <xi_i, xi_j>`` (symmetric PSD)."""
    w = dataset.points @ dataset.points.T
    return (w + w.T) / 2.0


def distance_matrix(dataset: DataSet) -> np.ndarray:
    """Squared Euclidean distances ``D_ij = ||xi_i - xi_j||^2``.

    Symmetric with an exactly zero diagonal; tiny negative values from
    cancellation are clipped to zero.
    """
    w = gram_matrix(dataset)
    sq = np.diag(w)
    d = sq[:, None] + sq[None, :] - 2.0 * w
    np.fill_diagonal(d, 0.0)
    return np.maximum(d, 0.0)


def centroids(dataset: DataSet, clustering: Clustering) -> np.ndarray:
    """Arithmetic mean of each cluster, shape ``(K, d)``."""
    out = np.empty((clustering.k, dataset.dim))
    for k, members in enumerate(clustering.clusters):
        if not members:
            raise DegenerateClusterError(f"cluster {k} is empty")
        out[k] = dataset.points[list(members)].mean(axis=0)
    return out


def cluster_cost(
    dataset: DataSet,
    clustering: Clustering,
    spec: CardinalitySpec | None = None,
) -> float:
    """Sum of squared distances from each point to its cluster mean.

    Outliers contribute nothing.  When ``spec`` is given the clustering is
    validated against it first.
    """
    clustering.validate(dataset.n, spec)
    cost = 0.0
    for members in clustering.clusters:
        pts = dataset.points[list(members)]
        cost += float(((pts - pts.mean(axis=0)) ** 2).sum())
    return cost


def pairwise_cost(distances: np.ndarray, clustering: Clustering) -> float:
    """Cluster cost evaluated through the pairwise form ``sum_k (1/2 n_k) sum_{i,j in I_k} d_ij``.

    Independent evaluation path of :func:`cluster_cost`; the two agree to
    rounding error for any clustering.
    """
    cost = 0.0
    for members in clustering.clusters:
        idx = list(members)
        if not idx:
            raise DegenerateClusterError("empty cluster in pairwise cost")
        sub = distances[np.ix_(idx, idx)]
        cost += float(sub.sum()) / (2.0 * len(idx))
    return cost
