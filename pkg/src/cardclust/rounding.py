"""Deterministic rounding of relaxation solutions into feasible clusterings.

Three schemes, matching the three relaxation families:

* ``round_general``: solve the per-cluster relaxation, assign points to
  clusters by maximising agreement with the relaxed membership scores
  under the cardinality constraints, then run a single centre-update /
  reassignment step.
* ``round_balanced``: peel clusters one at a time; each round solves the
  two-block balanced relaxation on the remaining points, sorts the pinned
  cluster's score vector and takes the top n indices.
* ``round_outlier``: solve the outlier relaxation once, peel the n_0
  highest outlier scores, then delegate to the matching scheme on the
  residual points.

Reported lower bounds always come from the first full-data solve; later
solves only guide the construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .assignment import solve_assignment
from .errors import SolverFailure, SpecViolationError
from .geometry import centroids, cluster_cost
from .relaxations import (
    RelaxationKind,
    RelaxationSolution,
    build_for_dataset,
    general_x_matrix,
)
from .solvers import DEFAULT_CONFIG, SolverConfig, solve_relaxation
from .types import CardinalitySpec, Clustering, DataSet


@dataclass
class RoundingResult:
    clustering: Clustering
    upper_bound: float
    lower_bound: float
    kind: RelaxationKind
    certified: bool
    relaxation: RelaxationSolution | None = None
    info: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        return (self.upper_bound - self.lower_bound) / max(1.0, abs(self.lower_bound))


def _solve_checked(program, config) -> RelaxationSolution:
    sol = solve_relaxation(program, config)
    if not sol.blocks:
        raise SolverFailure(f"relaxation solve failed with status {sol.status}")
    return sol


def _lloyd_step(dataset: DataSet, spec: CardinalitySpec, clustering: Clustering) -> Clustering:
    """One centre-update + capacitated reassignment pass (steps 5-7)."""
    centres = centroids(dataset, clustering)
    cost = ((dataset.points[:, None, :] - centres[None, :, :]) ** 2).sum(axis=2)
    pi = solve_assignment(cost, CardinalitySpec(spec.sizes))
    clusters = tuple(tuple(np.flatnonzero(pi[:, k])) for k in range(spec.k))
    return Clustering(clusters)


def round_general(
    dataset: DataSet,
    spec: CardinalitySpec,
    kind: RelaxationKind = RelaxationKind.R_SDP,
    config: SolverConfig = DEFAULT_CONFIG,
    *,
    solution: RelaxationSolution | None = None,
) -> RoundingResult:
    """Rounding scheme for the general per-cluster relaxations.

    A precomputed ``solution`` of the matching relaxation may be supplied
    to skip the solve.  Non-optimal solver statuses are not fatal: the
    best iterate is rounded and the result is flagged uncertified.
    """
    if kind not in (RelaxationKind.R_LP, RelaxationKind.R_SDP):
        raise SpecViolationError(f"round_general expects a general kind, got {kind.name}")
    if spec.outlier_count != 0:
        raise SpecViolationError("round_general handles specs without outliers")
    spec.validate_for(dataset.n)
    if solution is None:
        solution = _solve_checked(build_for_dataset(kind, dataset, spec), config)
    x = general_x_matrix(solution, spec)
    pi = solve_assignment(-x, spec)  # maximise sum pi_ik x_ik
    clusters = tuple(tuple(np.flatnonzero(pi[:, k])) for k in range(spec.k))
    refined = _lloyd_step(dataset, spec, Clustering(clusters))
    ub = cluster_cost(dataset, refined, spec)
    return RoundingResult(
        clustering=refined,
        upper_bound=ub,
        lower_bound=solution.objective,
        kind=kind,
        certified=solution.certified,
        relaxation=solution,
    )


def round_balanced(
    dataset: DataSet,
    n: int,
    k: int,
    kind: RelaxationKind = RelaxationKind.R_SDP_B,
    config: SolverConfig = DEFAULT_CONFIG,
    *,
    refine: bool = False,
) -> RoundingResult:
    """Peeling scheme for balanced clustering (K-1 relaxation solves).

    Sorting ties are broken towards the smaller index.  ``refine`` appends
    one centre-update/reassignment pass to the peeled clustering; the
    reported lower bound is always the first (full data) solve.
    """
    if kind not in (RelaxationKind.R_LP_B, RelaxationKind.R_SDP_B):
        raise SpecViolationError(f"round_balanced expects a balanced kind, got {kind.name}")
    if dataset.n != n * k:
        raise SpecViolationError(f"N={dataset.n} is not n*K={n}*{k}")
    remaining = list(range(dataset.n))
    clusters: list[tuple[int, ...]] = []
    first_solution: RelaxationSolution | None = None
    certified = True
    for step in range(k - 1):
        sub = dataset.subset(remaining)
        sub_spec = CardinalitySpec((n,) * (len(remaining) // n))
        sol = _solve_checked(build_for_dataset(kind, sub, sub_spec), config)
        if step == 0:
            first_solution = sol
            certified = sol.certified
        x1 = sol.blocks["x1"]
        order = np.argsort(-x1, kind="stable")
        clusters.append(tuple(remaining[i] for i in order[:n]))
        keep = np.ones(len(remaining), dtype=bool)
        keep[order[:n]] = False
        remaining = [remaining[i] for i in np.flatnonzero(keep)]
    clusters.append(tuple(remaining))
    clustering = Clustering(tuple(clusters))
    spec = CardinalitySpec((n,) * k)
    if k == 1 and first_solution is None:
        first_solution = _solve_checked(build_for_dataset(kind, dataset, spec), config)
        certified = first_solution.certified
    if refine:
        clustering = _lloyd_step(dataset, spec, clustering)
    ub = cluster_cost(dataset, clustering, spec)
    return RoundingResult(
        clustering=clustering,
        upper_bound=ub,
        lower_bound=first_solution.objective,
        kind=kind,
        certified=certified,
        relaxation=first_solution,
        info={"refined": refine},
    )


_OUTLIER_TO_RESIDUAL = {
    RelaxationKind.R_LP_O: RelaxationKind.R_LP,
    RelaxationKind.R_SDP_O: RelaxationKind.R_SDP,
    RelaxationKind.R_LP_OB: RelaxationKind.R_LP_B,
    RelaxationKind.R_SDP_OB: RelaxationKind.R_SDP_B,
}


def round_outlier(
    dataset: DataSet,
    spec: CardinalitySpec,
    kind: RelaxationKind = RelaxationKind.R_SDP_O,
    config: SolverConfig = DEFAULT_CONFIG,
    *,
    refine: bool = False,
) -> RoundingResult:
    """Joint outlier detection and clustering.

    The n_0 highest outlier scores are peeled off, then the residual data
    is clustered with the matching non-outlier scheme.  With n_0 = 0 the
    spec reduces to plain clustering and is delegated unchanged.
    """
    if kind not in _OUTLIER_TO_RESIDUAL:
        raise SpecViolationError(f"round_outlier expects an outlier kind, got {kind.name}")
    spec.validate_for(dataset.n)
    residual_kind = _OUTLIER_TO_RESIDUAL[kind]
    if spec.outlier_count == 0:
        inner_spec = CardinalitySpec(spec.sizes)
        if residual_kind in (RelaxationKind.R_LP_B, RelaxationKind.R_SDP_B):
            return round_balanced(
                dataset, spec.sizes[0], spec.k, residual_kind, config, refine=refine
            )
        return round_general(dataset, inner_spec, residual_kind, config)

    sol = _solve_checked(build_for_dataset(kind, dataset, spec), config)
    x0 = sol.blocks["x0"]
    order = np.argsort(-x0, kind="stable")
    outliers = tuple(int(i) for i in order[: spec.outlier_count])
    keep = np.ones(dataset.n, dtype=bool)
    keep[list(outliers)] = False
    residual_idx = np.flatnonzero(keep)
    residual = dataset.subset(residual_idx)
    inner_spec = CardinalitySpec(spec.sizes)
    if residual_kind in (RelaxationKind.R_LP_B, RelaxationKind.R_SDP_B):
        inner = round_balanced(
            residual, spec.sizes[0], spec.k, residual_kind, config, refine=refine
        )
    else:
        inner = round_general(residual, inner_spec, residual_kind, config)
    clusters = tuple(
        tuple(int(residual_idx[i]) for i in members) for members in inner.clustering.clusters
    )
    clustering = Clustering(clusters, outliers)
    ub = cluster_cost(dataset, clustering, spec)
    return RoundingResult(
        clustering=clustering,
        upper_bound=ub,
        lower_bound=sol.objective,
        kind=kind,
        certified=sol.certified,
        relaxation=sol,
        info={"residual": inner},
    )
