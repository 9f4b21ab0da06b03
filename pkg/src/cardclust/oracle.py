"""Exact optimum for tiny instances by exhaustive enumeration.

Partitions are enumerated with a symmetry-pruned depth-first search:
points join clusters in index order, and at most one empty cluster per
distinct size class is ever open, which removes the label permutations of
equal-size clusters.  Costs grow incrementally through the pairwise form
(adding point i to a cluster with members S costs ``sum_{j in S} d_ij / n``),
so branches already above the incumbent are cut.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np

from .errors import ResourceLimitError
from .geometry import distance_matrix
from .types import CardinalitySpec, Clustering, DataSet

DEFAULT_PARTITION_CAP = 2_000_000


@dataclass(frozen=True)
class OracleResult:
    clustering: Clustering
    cost: float
    enumerated: int  # complete partitions reached (pruned branches excluded)


def partition_count(n_points: int, spec: CardinalitySpec) -> int:
    """Number of label-normalised feasible partitions."""
    total = factorial(n_points)
    for s in spec.sizes:
        total //= factorial(s)
    if spec.outlier_count:
        total //= factorial(spec.outlier_count)
    counts: dict[int, int] = {}
    for s in spec.sizes:
        counts[s] = counts.get(s, 0) + 1
    for c in counts.values():
        total //= factorial(c)
    return total


def enumerate_optimal(
    dataset: DataSet,
    spec: CardinalitySpec,
    *,
    max_partitions: int = DEFAULT_PARTITION_CAP,
) -> OracleResult:
    """Globally optimal clustering (outliers contribute nothing to the cost).

    Raises ``ResourceLimitError`` when the symmetry-reduced partition count
    exceeds ``max_partitions``; there is no silent fallback.  Among optima
    the canonically smallest clustering is returned: equal-size clusters
    are ordered by smallest member, and exact cost ties compare the sorted
    member tuples lexicographically.
    """
    spec.validate_for(dataset.n)
    count = partition_count(dataset.n, spec)
    if count > max_partitions:
        raise ResourceLimitError(
            f"{count} partitions exceed the cap of {max_partitions}"
        )
    d = distance_matrix(dataset)
    n_points = dataset.n

    # slots grouped by size class; the outlier slot is its own class
    class_sizes = sorted(set(spec.sizes))
    class_count = {s: spec.sizes.count(s) for s in class_sizes}
    slots: list[dict] = []  # members list + capacity per open slot
    best = {"cost": np.inf, "clusters": None, "leaves": 0}

    members: list[list[int]] = []
    slot_size: list[int] = []
    outliers: list[int] = []

    def leaf() -> None:
        best["leaves"] += 1
        cost = sum(cluster_costs)
        if cost > best["cost"]:
            return
        key = _canonical_key(members, slot_size, outliers, spec)
        if cost < best["cost"] or (cost == best["cost"] and key < best["clusters"]):
            best["cost"] = cost
            best["clusters"] = key

    cluster_costs: list[float] = []

    def place(i: int) -> None:
        if i == n_points:
            leaf()
            return
        if sum(cluster_costs) > best["cost"]:  # ties continue, for canonical tie-break
            return
        opened_class: set[int] = set()
        for idx in range(len(members)):
            cap = slot_size[idx]
            group = members[idx]
            if len(group) == cap:
                continue
            if not group:
                if cap in opened_class:
                    continue
                opened_class.add(cap)
            inc = float(d[i, group].sum()) / cap if group else 0.0
            group.append(i)
            cluster_costs[idx] += inc
            place(i + 1)
            group.pop()
            cluster_costs[idx] -= inc
        # a fresh empty slot for a class with remaining clusters
        for s in class_sizes:
            used = sum(1 for sz, g in zip(slot_size, members) if sz == s)
            if used < class_count[s] and s not in opened_class:
                members.append([i])
                slot_size.append(s)
                cluster_costs.append(0.0)
                place(i + 1)
                members.pop()
                slot_size.pop()
                cluster_costs.pop()
        if spec.outlier_count and len(outliers) < spec.outlier_count:
            outliers.append(i)
            place(i + 1)
            outliers.pop()

    place(0)
    clusters, out = best["clusters"]
    clustering = Clustering(clusters, out)
    clustering.validate(n_points, spec)
    return OracleResult(clustering, float(best["cost"]), best["leaves"])


def _canonical_key(members, slot_size, outliers, spec: CardinalitySpec):
    """Map open slots back to spec positions: size classes in spec order,
    equal-size clusters sorted by smallest member."""
    by_size: dict[int, list[tuple[int, ...]]] = {}
    for sz, g in zip(slot_size, members):
        by_size.setdefault(sz, []).append(tuple(g))
    for sz in by_size:
        by_size[sz].sort(key=lambda g: g[0])
    taken: dict[int, int] = {s: 0 for s in by_size}
    ordered = []
    for s in spec.sizes:
        ordered.append(by_size[s][taken[s]])
        taken[s] += 1
    return tuple(ordered), tuple(outliers)
