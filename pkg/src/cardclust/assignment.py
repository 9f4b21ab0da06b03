"""Capacitated linear assignment with deterministic tie-breaking.

``solve_assignment`` distributes N rows over K columns with prescribed
column capacities, minimising a linear cost.  The optimum is computed on
the expanded N x N matrix (column k replicated ``n_k`` times) with the
Hungarian method, then post-processed to the lexicographically smallest
row-to-column map among all optimal assignments: complementary slackness
restricts optimal solutions to the zero-reduced-cost arcs, and a greedy
rerouting pass picks the smallest feasible column per row inside that
arc set.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import InvalidInputError, SpecViolationError
from .types import CardinalitySpec


def assignment_sizes(spec: CardinalitySpec) -> tuple[int, ...]:
    """Column capacities: the K cluster sizes, plus an outlier column when n_0 > 0."""
    if spec.outlier_count > 0:
        return spec.sizes + (spec.outlier_count,)
    return spec.sizes


def solve_assignment(cost: np.ndarray, spec: CardinalitySpec) -> np.ndarray:
    """Binary (N, K) assignment matrix minimising ``sum_ik cost_ik pi_ik``.

    Row sums are 1, column k sums to its prescribed size.  When the spec
    carries an outlier count the cost matrix must include the outlier
    column last.  Among equal-cost optima the lexicographically smallest
    row-to-column mapping is returned.
    """
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2:
        raise InvalidInputError("cost must be a 2-d array")
    if not np.all(np.isfinite(cost)):
        raise InvalidInputError("cost contains non-finite entries")
    sizes = assignment_sizes(spec)
    n, k = cost.shape
    if k != len(sizes):
        raise SpecViolationError(f"cost has {k} columns, spec implies {len(sizes)}")
    if sum(sizes) != n:
        raise SpecViolationError(f"sizes {sizes} sum to {sum(sizes)}, cost has {n} rows")

    col_of_copy = np.repeat(np.arange(k), sizes)
    row_ind, copy_ind = linear_sum_assignment(cost[:, col_of_copy])
    col = np.empty(n, dtype=int)
    col[row_ind] = col_of_copy[copy_ind]

    col = _lexicographic_canonicalize(cost, col, k)

    pi = np.zeros((n, k), dtype=int)
    pi[np.arange(n), col] = 1
    return pi


def assignment_value(cost: np.ndarray, pi: np.ndarray) -> float:
    return float((np.asarray(cost) * pi).sum())


def _optimal_duals(cost: np.ndarray, col: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Column/row potentials certifying optimality of ``col``.

    Feasible duals satisfy u_i + v_k <= c_ik with equality on assigned arcs.
    The v live on a K-node difference-constraint graph solved by
    Bellman-Ford; optimality of the input assignment rules out negative
    cycles.
    """
    n = cost.shape[0]
    w = np.full((k, k), np.inf)
    for a in range(k):
        rows = col == a
        w[a] = np.min(cost[rows] - cost[rows, a][:, None], axis=0)
        w[a, a] = 0.0
    v = np.zeros(k)
    for _ in range(k):
        nv = np.minimum(v, np.min(v[:, None] + w, axis=0))
        if np.array_equal(nv, v):
            break
        v = nv
    u = cost[np.arange(n), col] - v[col]
    return u, v


def _lexicographic_canonicalize(cost: np.ndarray, col: np.ndarray, k: int) -> np.ndarray:
    """Smallest row-to-column map among optima, via zero-reduced-cost rerouting."""
    n = cost.shape[0]
    if k == 1:
        return col
    u, v = _optimal_duals(cost, col, k)
    tie_tol = 1e-9 * (1.0 + float(np.abs(cost).max()))
    admissible = cost - u[:, None] - v[None, :] <= tie_tol

    col = col.copy()
    fixed = np.zeros(n, dtype=bool)
    onehot = np.zeros((n, k), dtype=bool)
    onehot[np.arange(n), col] = True
    for i in range(n):
        ki = col[i]
        if ki > 0:
            free = ~fixed
            free[i] = False
            # edges[l, lp]: some free row in column l may move to lp
            edges = (onehot[free].T.astype(np.int32) @ admissible[free].astype(np.int32)) > 0
            for kt in range(ki):
                if not admissible[i, kt]:
                    continue
                path = _find_path(edges, kt, ki)
                if path is None:
                    continue
                for l, lp in path:
                    j = int(np.flatnonzero(free & onehot[:, l] & admissible[:, lp])[0])
                    onehot[j, l] = False
                    onehot[j, lp] = True
                    col[j] = lp
                onehot[i, ki] = False
                onehot[i, kt] = True
                col[i] = kt
                break
        fixed[i] = True
    return col


def _find_path(edges: np.ndarray, src: int, dst: int) -> list[tuple[int, int]] | None:
    """BFS path src -> dst in the K-node exchange graph, as a list of arcs."""
    if src == dst:
        return []
    k = edges.shape[0]
    prev = np.full(k, -1, dtype=int)
    prev[src] = src
    frontier = [src]
    while frontier:
        nxt = []
        for a in frontier:
            for b in np.flatnonzero(edges[a]):
                if prev[b] == -1:
                    prev[b] = a
                    if b == dst:
                        arcs = []
                        node = dst
                        while node != src:
                            arcs.append((prev[node], node))
                            node = prev[node]
                        arcs.reverse()
                        return arcs
                    nxt.append(b)
        frontier = nxt
    return None
