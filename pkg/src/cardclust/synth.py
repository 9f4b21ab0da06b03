"""Synthetic instance generators and dataset preprocessing.

Two generators cover the recovery experiments:

* ``generate_stochastic_balls`` draws points uniformly from unit balls
  centred on a regular simplex with prescribed pairwise centre distance;
  whether the perfect-separation condition holds is decided from the
  realised sample, never assumed from the centre distance.
* ``generate_separated_instance`` scales the centre distances (and pushes
  outliers far out) after sampling so that the separation condition holds
  by construction for any margin > 1.

All generation is deterministic per seed (PCG64).
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import SpecViolationError
from .geometry import distance_matrix
from .types import CardinalitySpec, Clustering, DataSet


@dataclass(frozen=True)
class SeparationCertificate:
    max_intra: float  # largest squared diameter of a normal cluster
    min_inter: float  # smallest squared distance across two normal clusters
    min_outlier: float  # smallest squared distance from an outlier to anything

    @property
    def satisfies_s(self) -> bool:
        return self.max_intra < self.min_inter

    @property
    def satisfies_s_prime(self) -> bool:
        return self.satisfies_s and self.max_intra < self.min_outlier


@dataclass(frozen=True)
class PlantedInstance:
    dataset: DataSet
    clustering: Clustering
    certificate: SeparationCertificate
    seed: int
    params: dict

    @property
    def satisfies_s(self) -> bool:
        """Strict separation with balanced normal clusters."""
        sizes = {len(c) for c in self.clustering.clusters}
        return len(sizes) == 1 and self.certificate.satisfies_s

    @property
    def satisfies_s_prime(self) -> bool:
        sizes = {len(c) for c in self.clustering.clusters}
        return len(sizes) == 1 and self.certificate.satisfies_s_prime

    def spec(self) -> CardinalitySpec:
        return self.clustering.spec()


def separation_certificate(dataset: DataSet, clustering: Clustering) -> SeparationCertificate:
    """Recompute the separation quantities from realised distances."""
    d = distance_matrix(dataset)
    max_intra = 0.0
    for members in clustering.clusters:
        idx = list(members)
        if len(idx) > 1:
            max_intra = max(max_intra, float(d[np.ix_(idx, idx)].max()))
    min_inter = np.inf
    for a in range(clustering.k):
        for b in range(a + 1, clustering.k):
            ia, ib = list(clustering.clusters[a]), list(clustering.clusters[b])
            min_inter = min(min_inter, float(d[np.ix_(ia, ib)].min()))
    min_outlier = np.inf
    for i in clustering.outliers:
        others = [j for j in range(dataset.n) if j != i]
        min_outlier = min(min_outlier, float(d[i, others].min()))
    return SeparationCertificate(max_intra, float(min_inter), float(min_outlier))


def _simplex_centers(k: int, dim: int, distance: float) -> np.ndarray:
    """K points in R^dim, pairwise Euclidean distance ``distance``."""
    if k == 1:
        return np.zeros((1, dim))
    if dim < k - 1:
        raise SpecViolationError(f"dim={dim} too small for a {k}-vertex simplex")
    # vertices e_i of R^k projected onto the hyperplane orthogonal to 1
    verts = np.eye(k) - np.full((k, k), 1.0 / k)
    # orthonormal basis of that hyperplane
    basis, _ = np.linalg.qr(verts.T[:, : k - 1])
    coords = verts @ basis  # pairwise distance sqrt(2)
    coords *= distance / np.sqrt(2.0)
    out = np.zeros((k, dim))
    out[:, : k - 1] = coords
    return out


def _uniform_ball(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    direction = rng.standard_normal((count, dim))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    radius = rng.random(count) ** (1.0 / dim)
    return direction * radius[:, None]


def generate_stochastic_balls(
    sizes: tuple[int, ...] | list[int],
    delta: float,
    dim: int = 2,
    seed: int = 0,
) -> PlantedInstance:
    """Clusters drawn uniformly from unit balls at pairwise centre distance delta.

    The canonical study uses three balls in the plane; more clusters sit on
    a regular simplex in the first K-1 coordinates.  The separation flags
    are computed from the realised points (small delta usually fails them).
    """
    sizes = tuple(int(s) for s in sizes)
    k = len(sizes)
    if dim < max(1, k - 1):
        raise SpecViolationError(f"dim={dim} too small for K={k} ball centres")
    rng = np.random.default_rng(seed)
    centres = _simplex_centers(k, dim, float(delta))
    pts = []
    clusters = []
    start = 0
    for c, size in enumerate(sizes):
        pts.append(centres[c] + _uniform_ball(rng, size, dim))
        clusters.append(tuple(range(start, start + size)))
        start += size
    dataset = DataSet(np.vstack(pts))
    clustering = Clustering(tuple(clusters))
    cert = separation_certificate(dataset, clustering)
    return PlantedInstance(
        dataset, clustering, cert, seed, {"delta": float(delta), "dim": dim, "sizes": sizes}
    )


def generate_separated_instance(
    k: int,
    n: int,
    n_0: int = 0,
    dim: int = 2,
    margin: float = 2.0,
    seed: int = 0,
) -> PlantedInstance:
    """Instance that provably satisfies the separation condition.

    Clusters are sampled in unit balls first; centre distances are then
    set from the realised maximal squared diameter D so that every
    cross-cluster squared distance is at least ``margin * D`` (strictly
    above D for margin > 1).  Outliers go onto a far ray with the same
    guaranteed gaps.
    """
    if margin <= 1.0:
        raise SpecViolationError("margin must exceed 1")
    if dim < max(1, k - 1):
        raise SpecViolationError(f"dim={dim} too small for K={k}")
    rng = np.random.default_rng(seed)
    offsets = [_uniform_ball(rng, n, dim) for _ in range(k)]
    max_diam_sq = 0.0
    for off in offsets:
        if n > 1:
            diff = off[:, None, :] - off[None, :, :]
            max_diam_sq = max(max_diam_sq, float((diff**2).sum(axis=2).max()))
    base_sq = margin * max(max_diam_sq, 1e-2)
    separation = 2.0 + np.sqrt(base_sq)
    centres = _simplex_centers(k, dim, separation)
    pts = [centres[c] + offsets[c] for c in range(k)]
    clusters = []
    start = 0
    for c in range(k):
        clusters.append(tuple(range(start, start + n)))
        start += n
    outliers = tuple(range(start, start + n_0))
    if n_0:
        body = np.vstack(pts)
        gap = np.sqrt(base_sq)
        ray_start = float(np.abs(body).max()) * np.sqrt(dim) + gap
        out_pts = np.zeros((n_0, dim))
        out_pts[:, 0] = ray_start + gap * (1.0 + np.arange(n_0))
        pts.append(out_pts)
    dataset = DataSet(np.vstack(pts))
    clustering = Clustering(tuple(clusters), outliers)
    cert = separation_certificate(dataset, clustering)
    inst = PlantedInstance(
        dataset,
        clustering,
        cert,
        seed,
        {"k": k, "n": n, "n_0": n_0, "dim": dim, "margin": float(margin)},
    )
    assert inst.satisfies_s and (n_0 == 0 or inst.satisfies_s_prime)
    return inst


def zscore(dataset: DataSet) -> DataSet:
    """Standardise each feature to mean 0 and sample standard deviation 1.

    Zero-variance features map to all zeros with a warning.
    """
    if dataset.n < 2:
        raise SpecViolationError("standardisation needs at least two points")
    pts = dataset.points
    mean = pts.mean(axis=0)
    std = pts.std(axis=0, ddof=1)
    out = np.zeros_like(pts)
    dead = std == 0.0
    if dead.any():
        warnings.warn(f"features {np.flatnonzero(dead).tolist()} have zero variance; set to 0")
    live = ~dead
    out[:, live] = (pts[:, live] - mean[live]) / std[live]
    return DataSet(out)


def instance_to_csv(instance: PlantedInstance, path) -> None:
    """Write points with the planted label column (-1 marks outliers)."""
    labels = instance.clustering.labels(instance.dataset.n)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{j}" for j in range(instance.dataset.dim)] + ["label"])
        for i in range(instance.dataset.n):
            writer.writerow([repr(float(v)) for v in instance.dataset.points[i]] + [int(labels[i])])
