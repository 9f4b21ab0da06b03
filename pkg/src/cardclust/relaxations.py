"""Conic relaxations of cardinality-constrained K-means clustering.

Every relaxation family used by the bounds and rounding algorithms is
built here as an explicit :class:`~cardclust.programs.ConicProgram`:

* the per-cluster SDP/LP relaxations with sign cuts, their balanced
  two-block variants with a symmetry-breaking pin, and the outlier
  extensions whose auxiliary cluster is excluded from the objective;
* the naive LP relaxation of the assignment MILP;
* the Peng-Wei and Awasthi-style single-matrix relaxations used as
  comparison baselines.

The module also hosts the exact transforms between these solution spaces:
integral embeddings of clusterings, the lift from per-cluster blocks to a
single stochastic matrix, and the map back to assignment variables.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import PreconditionError, SpecViolationError
from .geometry import distance_matrix, gram_matrix
from .programs import (
    ConicProgram,
    MatrixBlock,
    Objective,
    PsdGroup,
    RowGroup,
    VectorBlock,
    affine_psd,
    coupling_rows,
    diag_rows,
    elementwise_bounds,
    inner_coeff,
    mat_row_sums,
    ordered_pair_rows,
    pin_entry,
    schur_psd,
    svec_size,
    sym_pair_rows,
    trace_row,
    vector_bounds,
    vector_sum,
)
from .types import CardinalitySpec, Clustering, DataSet


class RelaxationKind(enum.Enum):
    R_LP = "rlp"
    R_SDP = "rsdp"
    R_LP_B = "rlp_b"
    R_SDP_B = "rsdp_b"
    R_LP_O = "rlp_o"
    R_SDP_O = "rsdp_o"
    R_LP_OB = "rlp_ob"
    R_SDP_OB = "rsdp_ob"
    NAIVE_L = "naive_l"
    PW1 = "pw1"
    PW2 = "pw2"
    PW1_B = "pw1_b"
    AW = "aw"

    @property
    def is_sdp(self) -> bool:
        return self in _SDP_KINDS

    @property
    def is_balanced(self) -> bool:
        return self in (
            RelaxationKind.R_LP_B,
            RelaxationKind.R_SDP_B,
            RelaxationKind.R_LP_OB,
            RelaxationKind.R_SDP_OB,
            RelaxationKind.PW1_B,
        )

    @property
    def is_outlier(self) -> bool:
        return self in (
            RelaxationKind.R_LP_O,
            RelaxationKind.R_SDP_O,
            RelaxationKind.R_LP_OB,
            RelaxationKind.R_SDP_OB,
        )

    @property
    def is_pw(self) -> bool:
        return self in (
            RelaxationKind.PW1,
            RelaxationKind.PW2,
            RelaxationKind.PW1_B,
            RelaxationKind.AW,
        )


_SDP_KINDS = frozenset(
    {
        RelaxationKind.R_SDP,
        RelaxationKind.R_SDP_B,
        RelaxationKind.R_SDP_O,
        RelaxationKind.R_SDP_OB,
        RelaxationKind.PW1,
        RelaxationKind.PW2,
        RelaxationKind.PW1_B,
        RelaxationKind.AW,
    }
)


@dataclass
class RelaxationSolution:
    """Values of a relaxation's variable blocks plus solve diagnostics.

    ``status`` is one of ``optimal``, ``max-iterations``, ``infeasible``,
    ``numerical-failure`` for solver outputs, or ``feasible`` for points
    constructed exactly (integral embeddings).
    """

    kind: RelaxationKind
    program: ConicProgram
    blocks: dict[str, np.ndarray]
    objective: float
    status: str
    primal_residual: float = 0.0
    dual_residual: float = 0.0
    gap: float = 0.0
    iterations: int = 0
    solve_time: float = 0.0
    info: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.status == "optimal"

    def max_violation(self) -> float:
        return self.program.max_violation(self.blocks)


# ---------------------------------------------------------------------------
# block constraint sets


def _block_groups(
    x_off: int, m_off: int, n: int, n_points: int, sdp: bool, tag: str
) -> tuple[list[RowGroup], list[RowGroup], list[PsdGroup]]:
    """Constraints putting one (x, M) pair into C_SDP(n) or C_LP(n)."""
    if not 1 <= n <= n_points:
        raise SpecViolationError(f"block size {n} outside 1..{n_points}")
    s = 2 * n - n_points
    eq = [
        vector_sum(f"{tag}:sum(x)", x_off, n_points, float(s)),
        mat_row_sums(f"{tag}:M1=(2n-N)x", m_off, n_points, x_off, float(s), 0.0),
        diag_rows(f"{tag}:diag(M)=1", m_off, n_points, 1.0),
    ]
    le = [
        # M + 11' + x1' + 1x' >= 0  and  M + 11' - x1' - 1x' >= 0
        sym_pair_rows(f"{tag}:sign(++)", m_off, n_points, -1.0, x_off, -1.0, 1.0),
        sym_pair_rows(f"{tag}:sign(+-)", m_off, n_points, -1.0, x_off, +1.0, 1.0),
        # M - 11' + x1' - 1x' <= 0 (and its transpose)
        ordered_pair_rows(f"{tag}:sign(-+)", m_off, n_points, x_off, 1.0),
    ]
    psd = [schur_psd(f"{tag}:schur", m_off, x_off, n_points)] if sdp else []
    return eq, le, psd


def build_block_constraints(n: int, n_points: int, sdp: bool) -> ConicProgram:
    """Feasibility program for a single (x, M) pair in C_SDP(n) / C_LP(n)."""
    blocks = (VectorBlock("x", n_points), MatrixBlock("M", n_points))
    x_off, m_off = 0, n_points
    eq, le, psd = _block_groups(x_off, m_off, n, n_points, sdp, "C(n)")
    name = "C_SDP" if sdp else "C_LP"
    return ConicProgram(
        kind=f"{name}({n})",
        blocks=blocks,
        objective=Objective({}, 0.0),
        eq_groups=tuple(eq),
        le_groups=tuple(le),
        psd_groups=tuple(psd),
        meta={"n": n, "n_points": n_points},
    )


# ---------------------------------------------------------------------------
# relaxation builders


def _h_objective(d: np.ndarray, weights: dict[str, tuple[float, int]]) -> Objective:
    """Objective sum_b w_b <D, M_b + 11' + x_b 1' + 1 x_b'> over named pairs.

    ``weights`` maps an index tag to (weight, sign) used for the blocks
    named ``x{tag}`` / ``M{tag}``; sign flips the x contribution (for the
    implicit second block of two-cluster instances folded into one pair).
    """
    n_points = d.shape[0]
    ones_d = d @ np.ones(n_points)
    total = float(np.ones(n_points) @ ones_d)
    coeffs: dict[str, np.ndarray] = {}
    const = 0.0
    for tag, (w, sign) in weights.items():
        coeffs.setdefault(f"M{tag}", np.zeros(svec_size(n_points)))
        coeffs.setdefault(f"x{tag}", np.zeros(n_points))
        coeffs[f"M{tag}"] += w * inner_coeff(d)
        coeffs[f"x{tag}"] += w * sign * 2.0 * ones_d
        const += w * total
    return Objective(coeffs, const)


def _check_spec(kind: RelaxationKind, spec: CardinalitySpec, n_points: int) -> None:
    spec.validate_for(n_points)
    if kind.is_outlier:
        if spec.outlier_count < 1:
            raise SpecViolationError(f"{kind.name} requires an outlier count >= 1")
    elif spec.outlier_count != 0:
        raise SpecViolationError(f"{kind.name} does not take an outlier cluster")
    if kind.is_balanced and not spec.balanced:
        raise SpecViolationError(f"{kind.name} requires equal cluster sizes, got {spec.sizes}")


def build_relaxation(
    kind: RelaxationKind,
    distances: np.ndarray,
    gram: np.ndarray | None,
    spec: CardinalitySpec,
    *,
    pin_first_naive: bool = False,
) -> ConicProgram:
    """Construct the requested relaxation as an explicit conic program.

    ``distances`` is the squared-distance matrix; ``gram`` is only needed
    by the PW-style kinds (whose objectives read the Gram matrix).
    ``pin_first_naive`` adds the optional symmetry-breaking pin
    ``pi^1_1 = 1`` to the naive LP relaxation.
    """
    d = np.asarray(distances, dtype=float)
    n_points = d.shape[0]
    _check_spec(kind, spec, n_points)
    meta = {"n_points": n_points, "spec": spec, "kind": kind}

    if kind in (RelaxationKind.R_LP, RelaxationKind.R_SDP):
        return _build_general(kind, d, spec, meta)
    if kind in (RelaxationKind.R_LP_B, RelaxationKind.R_SDP_B):
        return _build_balanced(kind, d, spec, meta)
    if kind in (RelaxationKind.R_LP_O, RelaxationKind.R_SDP_O):
        return _build_outlier(kind, d, spec, meta)
    if kind in (RelaxationKind.R_LP_OB, RelaxationKind.R_SDP_OB):
        return _build_outlier_balanced(kind, d, spec, meta)
    if kind is RelaxationKind.NAIVE_L:
        return _build_naive(d, spec, meta, pin_first_naive)
    if kind.is_pw:
        if kind is RelaxationKind.AW:
            w = None
        else:
            if gram is None:
                raise SpecViolationError(f"{kind.name} needs the Gram matrix")
            w = np.asarray(gram, dtype=float)
        return _build_pw(kind, d, w, spec, meta)
    raise SpecViolationError(f"unknown kind {kind}")


def build_for_dataset(
    kind: RelaxationKind, dataset: DataSet, spec: CardinalitySpec, **kwargs
) -> ConicProgram:
    return build_relaxation(kind, distance_matrix(dataset), gram_matrix(dataset), spec, **kwargs)


def _build_general(kind, d, spec, meta) -> ConicProgram:
    n_points, k = d.shape[0], spec.k
    sdp = kind.is_sdp
    if k == 2:
        # two-cluster instances fold into one (x, M) pair: the second
        # cluster's blocks are the mirror images (-x, M), and its C(n_2)
        # membership is implied by C(n_1).
        blocks = (VectorBlock("x1", n_points), MatrixBlock("M1", n_points))
        prog_meta = dict(meta, merged_two_cluster=True)
        x_off, m_off = 0, n_points
        eq, le, psd = _block_groups(x_off, m_off, spec.sizes[0], n_points, sdp, "k1")
        w1 = 1.0 / (8.0 * spec.sizes[0])
        w2 = 1.0 / (8.0 * spec.sizes[1])
        obj = _h_objective(d, {"1": (w1, +1)})
        obj2 = _h_objective(d, {"1": (w2, -1)})
        coeffs = {name: obj.coeffs[name] + obj2.coeffs[name] for name in obj.coeffs}
        objective = Objective(coeffs, obj.constant + obj2.constant)
        return ConicProgram(
            kind.value, blocks, objective, tuple(eq), tuple(le), tuple(psd), prog_meta
        )
    blocks: list = []
    for kk in range(1, k + 1):
        blocks.append(VectorBlock(f"x{kk}", n_points))
        blocks.append(MatrixBlock(f"M{kk}", n_points))
    prog = ConicProgram(kind.value, tuple(blocks), Objective({}), (), (), (), meta)
    offs = prog.offsets
    eq, le, psd = [], [], []
    for kk in range(1, k + 1):
        e, l, p = _block_groups(
            offs[f"x{kk}"], offs[f"M{kk}"], spec.sizes[kk - 1], n_points, sdp, f"k{kk}"
        )
        eq += e
        le += l
        psd += p
    eq.append(
        coupling_rows(
            "sum_k x^k=(2-K)1",
            [(offs[f"x{kk}"], 1.0) for kk in range(1, k + 1)],
            n_points,
            float(2 - k),
        )
    )
    objective = _h_objective(
        d, {str(kk): (1.0 / (8.0 * spec.sizes[kk - 1]), +1) for kk in range(1, k + 1)}
    )
    return ConicProgram(kind.value, tuple(blocks), objective, tuple(eq), tuple(le), tuple(psd), meta)


def _build_balanced(kind, d, spec, meta) -> ConicProgram:
    n_points, k = d.shape[0], spec.k
    n = spec.sizes[0]
    sdp = kind.is_sdp
    blocks = (
        VectorBlock("x1", n_points),
        MatrixBlock("M1", n_points),
        VectorBlock("x", n_points),
        MatrixBlock("M", n_points),
    )
    prog = ConicProgram(kind.value, blocks, Objective({}), (), (), (), meta)
    offs = prog.offsets
    eq1, le1, psd1 = _block_groups(offs["x1"], offs["M1"], n, n_points, sdp, "b1")
    eq2, le2, psd2 = _block_groups(offs["x"], offs["M"], n, n_points, sdp, "b*")
    eq = eq1 + eq2
    eq.append(
        coupling_rows(
            "x1+(K-1)x=(2-K)1",
            [(offs["x1"], 1.0), (offs["x"], float(k - 1))],
            n_points,
            float(2 - k),
        )
    )
    eq.append(pin_entry("pin x1_1=1", offs["x1"], 0, 1.0))
    w = 1.0 / (8.0 * n)
    objective = _h_objective(d, {"1": (w, +1), "": ((k - 1) * w, +1)})
    return ConicProgram(
        kind.value, blocks, objective, tuple(eq), tuple(le1 + le2), tuple(psd1 + psd2), meta
    )


def _build_outlier(kind, d, spec, meta) -> ConicProgram:
    n_points, k = d.shape[0], spec.k
    sdp = kind.is_sdp
    sizes = (spec.outlier_count,) + spec.sizes  # block 0 is the outlier cluster
    blocks: list = []
    for kk in range(0, k + 1):
        blocks.append(VectorBlock(f"x{kk}", n_points))
        blocks.append(MatrixBlock(f"M{kk}", n_points))
    prog = ConicProgram(kind.value, tuple(blocks), Objective({}), (), (), (), meta)
    offs = prog.offsets
    eq, le, psd = [], [], []
    for kk in range(0, k + 1):
        e, l, p = _block_groups(offs[f"x{kk}"], offs[f"M{kk}"], sizes[kk], n_points, sdp, f"k{kk}")
        eq += e
        le += l
        psd += p
    eq.append(
        coupling_rows(
            "sum_{k>=0} x^k=(1-K)1",
            [(offs[f"x{kk}"], 1.0) for kk in range(0, k + 1)],
            n_points,
            float(1 - k),
        )
    )
    objective = _h_objective(
        d, {str(kk): (1.0 / (8.0 * spec.sizes[kk - 1]), +1) for kk in range(1, k + 1)}
    )
    return ConicProgram(kind.value, tuple(blocks), objective, tuple(eq), tuple(le), tuple(psd), meta)


def _build_outlier_balanced(kind, d, spec, meta) -> ConicProgram:
    n_points, k = d.shape[0], spec.k
    n = spec.sizes[0]
    sdp = kind.is_sdp
    blocks = (
        VectorBlock("x", n_points),
        MatrixBlock("M", n_points),
        VectorBlock("x0", n_points),
        MatrixBlock("M0", n_points),
    )
    prog = ConicProgram(kind.value, blocks, Objective({}), (), (), (), meta)
    offs = prog.offsets
    eq1, le1, psd1 = _block_groups(offs["x"], offs["M"], n, n_points, sdp, "b*")
    eq0, le0, psd0 = _block_groups(offs["x0"], offs["M0"], spec.outlier_count, n_points, sdp, "b0")
    eq = eq1 + eq0
    eq.append(
        coupling_rows(
            "Kx+x0=(1-K)1",
            [(offs["x"], float(k)), (offs["x0"], 1.0)],
            n_points,
            float(1 - k),
        )
    )
    objective = _h_objective(d, {"": (k / (8.0 * n), +1)})
    return ConicProgram(
        kind.value, blocks, objective, tuple(eq), tuple(le1 + le0), tuple(psd1 + psd0), meta
    )


def _build_naive(d, spec, meta, pin_first: bool) -> ConicProgram:
    n_points, k = d.shape[0], spec.k
    blocks: list = []
    for kk in range(1, k + 1):
        blocks.append(VectorBlock(f"pi{kk}", n_points))
        blocks.append(MatrixBlock(f"eta{kk}", n_points))
    prog = ConicProgram("naive_l", tuple(blocks), Objective({}), (), (), (), meta)
    offs = prog.offsets
    eq, le = [], []
    coeffs: dict[str, np.ndarray] = {}
    for kk in range(1, k + 1):
        nk = spec.sizes[kk - 1]
        eq.append(vector_sum(f"k{kk}:sum(pi)=n_k", offs[f"pi{kk}"], n_points, float(nk)))
        le += vector_bounds(f"k{kk}:pi", offs[f"pi{kk}"], n_points, 0.0, None)
        le += elementwise_bounds(f"k{kk}:eta", offs[f"eta{kk}"], n_points, 0.0, None)
        # eta_ij >= pi_i + pi_j - 1
        le.append(
            sym_pair_rows(
                f"k{kk}:eta>=pi_i+pi_j-1", offs[f"eta{kk}"], n_points, -1.0, offs[f"pi{kk}"], 1.0, 1.0
            )
        )
        coeffs[f"eta{kk}"] = inner_coeff(d) / (2.0 * nk)
    eq.append(
        coupling_rows(
            "sum_k pi^k=1",
            [(offs[f"pi{kk}"], 1.0) for kk in range(1, k + 1)],
            n_points,
            1.0,
        )
    )
    if pin_first:
        eq.append(pin_entry("pin pi1_1=1", offs["pi1"], 0, 1.0))
    return ConicProgram("naive_l", tuple(blocks), Objective(coeffs, 0.0), tuple(eq), tuple(le), (), meta)


def _build_pw(kind, d, w, spec, meta) -> ConicProgram:
    n_points, k = d.shape[0], spec.k
    blocks = (MatrixBlock("Z", n_points),)
    eq = [
        mat_row_sums("Z1=1", 0, n_points, None, 0.0, 1.0),
        trace_row("tr(Z)=K", 0, n_points, float(k)),
    ]
    le: list[RowGroup] = []
    psd = [affine_psd("Z psd", 0, n_points, 1.0, 0.0)]
    if kind in (RelaxationKind.PW1, RelaxationKind.AW):
        le += elementwise_bounds("Z", 0, n_points, 0.0, None)
    elif kind is RelaxationKind.PW1_B:
        le += elementwise_bounds("Z", 0, n_points, 0.0, k / n_points)
    elif kind is RelaxationKind.PW2:
        psd.append(affine_psd("I-Z psd", 0, n_points, -1.0, 1.0))
    if kind is RelaxationKind.AW:
        objective = Objective({"Z": inner_coeff(d)}, 0.0)
    else:
        objective = Objective({"Z": -inner_coeff(w)}, float(np.trace(w)))
    return ConicProgram(kind.value, blocks, objective, tuple(eq), tuple(le), tuple(psd), meta)


# ---------------------------------------------------------------------------
# exact transforms between solution spaces


def _sign_vector(members, n_points: int) -> np.ndarray:
    x = -np.ones(n_points)
    x[list(members)] = 1.0
    return x


def embed_integral(
    dataset: DataSet,
    clustering: Clustering,
    spec: CardinalitySpec,
    kind: RelaxationKind = RelaxationKind.R_SDP,
) -> RelaxationSolution:
    """Exact feasible point of an R-relaxation encoding a clustering.

    Sign vectors are +-1 memberships and each M block is the outer product
    (averaged across clusters for the folded balanced forms), so all
    constraints hold to machine precision and the relaxation objective
    equals the clustering cost.
    """
    if kind.is_pw or kind is RelaxationKind.NAIVE_L:
        raise SpecViolationError("integral embedding is defined for the R-relaxation kinds")
    clustering.validate(dataset.n, spec)
    d = distance_matrix(dataset)
    program = build_relaxation(kind, d, None, spec)
    n_points, k = dataset.n, spec.k
    xs = [_sign_vector(c, n_points) for c in clustering.clusters]

    blocks: dict[str, np.ndarray]
    if kind in (RelaxationKind.R_LP, RelaxationKind.R_SDP):
        if k == 2:
            blocks = {"x1": xs[0], "M1": np.outer(xs[0], xs[0])}
        else:
            blocks = {}
            for kk in range(1, k + 1):
                blocks[f"x{kk}"] = xs[kk - 1]
                blocks[f"M{kk}"] = np.outer(xs[kk - 1], xs[kk - 1])
    elif kind in (RelaxationKind.R_LP_B, RelaxationKind.R_SDP_B):
        # the symmetry-breaking pin wants point 0's cluster in slot 1
        first = next(i for i, c in enumerate(clustering.clusters) if 0 in c)
        rest = [xs[i] for i in range(k) if i != first]
        blocks = {"x1": xs[first], "M1": np.outer(xs[first], xs[first])}
        if rest:
            blocks["x"] = np.mean(rest, axis=0)
            blocks["M"] = np.mean([np.outer(x, x) for x in rest], axis=0)
        else:  # K = 1: the mirror blocks carry the same single cluster
            blocks["x"] = xs[first]
            blocks["M"] = np.outer(xs[first], xs[first])
    elif kind in (RelaxationKind.R_LP_O, RelaxationKind.R_SDP_O):
        x0 = _sign_vector(clustering.outliers, n_points)
        blocks = {"x0": x0, "M0": np.outer(x0, x0)}
        for kk in range(1, k + 1):
            blocks[f"x{kk}"] = xs[kk - 1]
            blocks[f"M{kk}"] = np.outer(xs[kk - 1], xs[kk - 1])
    else:  # outlier balanced
        x0 = _sign_vector(clustering.outliers, n_points)
        blocks = {
            "x": np.mean(xs, axis=0),
            "M": np.mean([np.outer(x, x) for x in xs], axis=0),
            "x0": x0,
            "M0": np.outer(x0, x0),
        }
    u = program.pack(blocks)
    return RelaxationSolution(
        kind=kind,
        program=program,
        blocks=blocks,
        objective=program.objective_value(u),
        status="feasible",
        primal_residual=program.max_violation(u),
        info={"source": "integral-embedding"},
    )


def _h_matrix(x: np.ndarray, m: np.ndarray) -> np.ndarray:
    ones = np.ones_like(x)
    return m + np.outer(ones, ones) + np.outer(x, ones) + np.outer(ones, x)


def lift_to_pw(
    solution: RelaxationSolution, spec: CardinalitySpec, feas_tol: float = 1e-6
) -> np.ndarray:
    """Map an SDP-relaxation solution to a feasible point of the Peng-Wei set.

    Returns the stochastic matrix ``Z = (1/4) sum_k (1/n_k) H_k`` (with the
    folded balanced variant scaled by K/4N); raises ``PreconditionError``
    when the input violates its own program by more than ``feas_tol``.
    """
    if solution.kind not in (RelaxationKind.R_SDP, RelaxationKind.R_SDP_B):
        raise SpecViolationError("lift is defined for the SDP relaxations only")
    worst = solution.max_violation()
    if worst > feas_tol:
        report = solution.program.violation_report(solution.blocks)
        top = sorted(report.items(), key=lambda kv: -kv[1])[:5]
        raise PreconditionError(f"input infeasible (max violation {worst:.2e}): {top}")
    k = spec.k
    if solution.kind is RelaxationKind.R_SDP:
        if solution.program.meta.get("merged_two_cluster"):
            x1, m1 = solution.blocks["x1"], solution.blocks["M1"]
            z = _h_matrix(x1, m1) / spec.sizes[0] + _h_matrix(-x1, m1) / spec.sizes[1]
            return z / 4.0
        z = sum(
            _h_matrix(solution.blocks[f"x{kk}"], solution.blocks[f"M{kk}"]) / spec.sizes[kk - 1]
            for kk in range(1, k + 1)
        )
        return z / 4.0
    n_points = solution.program.meta["n_points"]
    h1 = _h_matrix(solution.blocks["x1"], solution.blocks["M1"])
    h = _h_matrix(solution.blocks["x"], solution.blocks["M"])
    return (k / (4.0 * n_points)) * (h1 + (k - 1) * h)


def to_assignment_space(x: np.ndarray, m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map one (x, M) pair to naive-relaxation variables (pi, eta)."""
    x = np.asarray(x, dtype=float)
    m = np.asarray(m, dtype=float)
    pi = (x + 1.0) / 2.0
    eta = (m + x[:, None] + x[None, :] + 1.0) / 4.0
    return pi, eta


def general_x_matrix(solution: RelaxationSolution, spec: CardinalitySpec) -> np.ndarray:
    """Per-cluster score columns x^k for the assignment step of the rounding scheme."""
    if solution.kind not in (RelaxationKind.R_LP, RelaxationKind.R_SDP):
        raise SpecViolationError("x-matrix extraction applies to the general kinds")
    if solution.program.meta.get("merged_two_cluster"):
        x1 = solution.blocks["x1"]
        return np.column_stack([x1, -x1])
    return np.column_stack([solution.blocks[f"x{kk}"] for kk in range(1, spec.k + 1)])
