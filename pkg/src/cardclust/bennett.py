"""Local-search baseline: alternating capacitated assignment and centre updates.

This is the classical Lloyd-style heuristic adapted to exact cluster
cardinalities: each sweep assigns all points to the nearest centres
subject to the size constraints (an optimal transportation step), then
recomputes the centres.  It terminates when the centres stop changing,
when an assignment repeats (a guard against ties cycling), or at the
iteration cap.  Multi-start wrappers seed it with k-means++ draws.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assignment import solve_assignment
from .errors import SpecViolationError
from .geometry import centroids, cluster_cost
from .types import CardinalitySpec, Clustering, DataSet


@dataclass(frozen=True)
class BennettResult:
    clustering: Clustering
    cost: float
    iterations: int
    converged: bool
    costs: tuple[float, ...]  # cost after each sweep


@dataclass(frozen=True)
class MultiStartReport:
    best: BennettResult
    run_costs: tuple[float, ...]
    runs: int
    seed: int

    @property
    def best_cost(self) -> float:
        return self.best.cost

    @property
    def coefficient_of_variation(self) -> float:
        costs = np.asarray(self.run_costs)
        mean = costs.mean()
        if mean == 0.0:
            return 0.0
        return float(costs.std() / mean)


def kmeanspp_centers(dataset: DataSet, k: int, seed: int | np.random.Generator = 0) -> np.ndarray:
    """k-means++ seeding: iteratively sample points proportionally to the
    squared distance from the nearest centre chosen so far.

    Deterministic for a fixed seed (PCG64 streams).  When every remaining
    point coincides with a chosen centre, sampling falls back to a uniform
    draw over the unchosen points.
    """
    if k > dataset.n:
        raise SpecViolationError(f"K={k} exceeds N={dataset.n}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    pts = dataset.points
    chosen = np.zeros(dataset.n, dtype=bool)
    first = int(rng.integers(dataset.n))
    chosen[first] = True
    centres = [pts[first]]
    for _ in range(1, k):
        dist = np.min(
            ((pts[:, None, :] - np.asarray(centres)[None, :, :]) ** 2).sum(axis=2), axis=1
        )
        dist[chosen] = 0.0
        total = dist.sum()
        if total > 0.0:
            idx = int(rng.choice(dataset.n, p=dist / total))
        else:
            idx = int(rng.choice(np.flatnonzero(~chosen)))
        chosen[idx] = True
        centres.append(pts[idx])
    return np.asarray(centres)


def bennett(
    dataset: DataSet,
    spec: CardinalitySpec,
    init: np.ndarray,
    max_iters: int = 200,
) -> BennettResult:
    """Alternating assignment / centre-update local search from given centres."""
    if spec.outlier_count != 0:
        raise SpecViolationError("the local search handles specs without outliers")
    spec.validate_for(dataset.n)
    init = np.asarray(init, dtype=float)
    if init.shape != (spec.k, dataset.dim):
        raise SpecViolationError(f"init must have shape ({spec.k}, {dataset.dim})")

    centres = init
    seen: set[bytes] = set()
    costs: list[float] = []
    clustering: Clustering | None = None
    converged = False
    iterations = 0
    for _ in range(max_iters):
        iterations += 1
        cost_mat = ((dataset.points[:, None, :] - centres[None, :, :]) ** 2).sum(axis=2)
        pi = solve_assignment(cost_mat, spec)
        clustering = Clustering(
            tuple(tuple(np.flatnonzero(pi[:, k])) for k in range(spec.k))
        )
        costs.append(cluster_cost(dataset, clustering, spec))
        key = pi.astype(np.int8).tobytes()
        new_centres = centroids(dataset, clustering)
        if np.array_equal(new_centres, centres) or key in seen:
            converged = True
            break
        seen.add(key)
        centres = new_centres
    assert clustering is not None
    return BennettResult(clustering, costs[-1], iterations, converged, tuple(costs))


def multistart_bennett(
    dataset: DataSet,
    spec: CardinalitySpec,
    runs: int = 10,
    seed: int = 0,
    max_iters: int = 200,
) -> MultiStartReport:
    """Best of ``runs`` independent local searches, seeded by seed + run index."""
    if runs < 1:
        raise SpecViolationError("runs must be >= 1")
    results = []
    for r in range(runs):
        init = kmeanspp_centers(dataset, spec.k, seed + r)
        results.append(bennett(dataset, spec, init, max_iters))
    best = min(range(runs), key=lambda r: (results[r].cost, r))
    return MultiStartReport(
        best=results[best],
        run_costs=tuple(res.cost for res in results),
        runs=runs,
        seed=seed,
    )
