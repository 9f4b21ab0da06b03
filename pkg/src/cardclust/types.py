"""Core immutable data types: datasets, cardinality specs, clusterings.

All types are frozen after construction and safe to share between
concurrent tasks.  Matrices derived from a dataset (squared distances,
Gram) are plain ``numpy`` arrays produced by :mod:`cardclust.geometry`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, SpecViolationError


@dataclass(frozen=True)
class DataSet:
    """An ordered list of N points in d-dimensional feature space.

    Parameters
    ----------
    points:
        Array of shape ``(N, d)``.  Copied and stored as float64; every
        entry must be finite.
    """

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InvalidInputError(f"points must be a non-empty 2-d array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise InvalidInputError("points contain non-finite coordinates")
        pts = pts.copy()
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def subset(self, indices) -> "DataSet":
        """Dataset restricted to ``indices`` (order preserved)."""
        idx = np.asarray(indices, dtype=int)
        return DataSet(self.points[idx])

    def __repr__(self) -> str:  # keep reprs short; points can be large
        return f"DataSet(n={self.n}, dim={self.dim})"


@dataclass(frozen=True)
class CardinalitySpec:
    """Prescribed cluster sizes ``n_1..n_K`` plus an optional outlier count ``n_0``.

    Sizes must be positive; a prescribed ``n_k = 0`` is rejected rather than
    interpreted.  ``outlier_count`` may be zero (no outlier cluster).
    """

    sizes: tuple[int, ...]
    outlier_count: int = 0

    def __post_init__(self) -> None:
        sizes = tuple(int(s) for s in self.sizes)
        if len(sizes) < 1:
            raise SpecViolationError("at least one cluster size is required")
        if any(s <= 0 for s in sizes):
            raise SpecViolationError(f"cluster sizes must be positive, got {sizes}")
        if int(self.outlier_count) < 0:
            raise SpecViolationError("outlier_count must be >= 0")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "outlier_count", int(self.outlier_count))

    @property
    def k(self) -> int:
        return len(self.sizes)

    @property
    def total(self) -> int:
        return self.outlier_count + sum(self.sizes)

    @property
    def balanced(self) -> bool:
        return len(set(self.sizes)) == 1

    def validate_for(self, n_points: int) -> None:
        if self.total != n_points:
            raise SpecViolationError(
                f"sizes {self.sizes} + outliers {self.outlier_count} sum to "
                f"{self.total}, dataset has {n_points} points"
            )

    @staticmethod
    def balanced_spec(n_points: int, k: int, outlier_count: int = 0) -> "CardinalitySpec":
        body = n_points - outlier_count
        if k < 1 or body <= 0 or body % k != 0:
            raise SpecViolationError(
                f"cannot split {n_points} points (minus {outlier_count} outliers) into {k} equal clusters"
            )
        return CardinalitySpec((body // k,) * k, outlier_count)


@dataclass(frozen=True)
class Clustering:
    """A partition ``I_1..I_K`` of point indices, plus an optional outlier set ``I_0``.

    Clusters are stored as sorted tuples of 0-based indices.  Validity
    against a dataset/spec is checked by :meth:`validate`; construction only
    normalises the representation.
    """

    clusters: tuple[tuple[int, ...], ...]
    outliers: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        clusters = tuple(tuple(sorted(int(i) for i in c)) for c in self.clusters)
        outliers = tuple(sorted(int(i) for i in self.outliers))
        object.__setattr__(self, "clusters", clusters)
        object.__setattr__(self, "outliers", outliers)

    @property
    def k(self) -> int:
        return len(self.clusters)

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.clusters) + len(self.outliers)

    def validate(self, n_points: int, spec: CardinalitySpec | None = None) -> None:
        """Check the partition property and, when given, the cardinality spec."""
        seen: set[int] = set()
        for group in (*self.clusters, self.outliers):
            for i in group:
                if i < 0 or i >= n_points:
                    raise SpecViolationError(f"index {i} out of range for N={n_points}")
                if i in seen:
                    raise SpecViolationError(f"index {i} assigned twice")
                seen.add(i)
        if len(seen) != n_points:
            raise SpecViolationError(f"only {len(seen)} of {n_points} points assigned")
        if spec is not None:
            if spec.k != self.k:
                raise SpecViolationError(f"spec has K={spec.k}, clustering has K={self.k}")
            actual = tuple(len(c) for c in self.clusters)
            if actual != spec.sizes:
                raise SpecViolationError(f"cluster sizes {actual} do not match spec {spec.sizes}")
            if len(self.outliers) != spec.outlier_count:
                raise SpecViolationError(
                    f"outlier set has {len(self.outliers)} points, spec wants {spec.outlier_count}"
                )

    def labels(self, n_points: int) -> np.ndarray:
        """Per-point cluster index (0-based); outliers get label -1."""
        lab = np.full(n_points, -1, dtype=int)
        for k, members in enumerate(self.clusters):
            lab[list(members)] = k
        return lab

    @staticmethod
    def from_labels(labels, k: int | None = None) -> "Clustering":
        """Build a clustering from a label vector; label -1 marks outliers."""
        lab = np.asarray(labels, dtype=int)
        kk = int(lab.max()) + 1 if k is None else k
        clusters = tuple(tuple(np.flatnonzero(lab == j)) for j in range(kk))
        outliers = tuple(np.flatnonzero(lab == -1))
        return Clustering(clusters, outliers)

    def spec(self) -> CardinalitySpec:
        return CardinalitySpec(tuple(len(c) for c in self.clusters), len(self.outliers))
