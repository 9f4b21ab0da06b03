"""Structured conic programs over named vector and symmetric-matrix blocks.

A :class:`ConicProgram` is a linear objective plus three families of
constraints: equality row groups, elementwise inequality row groups
(normalised to ``a'u <= rhs``), and PSD requirements on affine matrix
expressions.  Symmetric matrix blocks are stored in "svec" coordinates:
the upper triangle in row-major order, one variable per unordered pair.
Groups stay separate (rather than being flattened into one big matrix at
build time) so the solver backends can stream them into their own sparse
forms and tests can report violations per named group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import InvalidInputError

# ---------------------------------------------------------------------------
# svec helpers


def svec_size(order: int) -> int:
    return order * (order + 1) // 2


def svec_pairs(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Canonical (i, j) pairs with i <= j, row-major."""
    return np.triu_indices(order)


def svec_index(order: int, a, b) -> np.ndarray:
    """Flat svec position of entry (a, b) (order-insensitive)."""
    a = np.asarray(a, dtype=int)
    b = np.asarray(b, dtype=int)
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    return lo * order - lo * (lo - 1) // 2 + (hi - lo)


def mat_to_svec(m: np.ndarray) -> np.ndarray:
    iu, ju = svec_pairs(m.shape[0])
    return np.asarray(m)[iu, ju]


def svec_to_mat(v: np.ndarray, order: int) -> np.ndarray:
    iu, ju = svec_pairs(order)
    m = np.zeros((order, order))
    m[iu, ju] = v
    m[ju, iu] = v
    return m


def inner_coeff(m: np.ndarray) -> np.ndarray:
    """svec coefficients c with c'svec(X) = <M, X> for symmetric X (off-diag doubled)."""
    iu, ju = svec_pairs(m.shape[0])
    c = np.asarray(m, dtype=float)[iu, ju].copy()
    c[iu != ju] *= 2.0
    return c


# ---------------------------------------------------------------------------
# blocks


@dataclass(frozen=True)
class VectorBlock:
    name: str
    size: int

    @property
    def flat_size(self) -> int:
        return self.size


@dataclass(frozen=True)
class MatrixBlock:
    name: str
    order: int

    @property
    def flat_size(self) -> int:
        return svec_size(self.order)


# ---------------------------------------------------------------------------
# constraint groups


@dataclass(frozen=True)
class RowGroup:
    """A batch of linear rows sharing one semantic meaning.

    ``sense`` is "eq" (rows == rhs) or "le" (rows <= rhs).  Entries are COO
    triplets against the flat variable layout of the owning program;
    duplicate (row, col) entries sum.
    """

    label: str
    sense: str
    row: np.ndarray
    col: np.ndarray
    val: np.ndarray
    rhs: np.ndarray

    @property
    def nrows(self) -> int:
        return len(self.rhs)

    def matrix(self, nvars: int) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.val, (self.row, self.col)), shape=(self.nrows, nvars)
        )

    def violation(self, u: np.ndarray, nvars: int) -> float:
        r = self.matrix(nvars) @ u - self.rhs
        if self.sense == "eq":
            return float(np.abs(r).max(initial=0.0))
        return float(np.maximum(r, 0.0).max(initial=0.0))


@dataclass(frozen=True)
class PsdGroup:
    """Requirement that an affine symmetric matrix expression be PSD.

    The expression is stored in unscaled svec coordinates:
    ``S = mat(E u + const)`` with E given as COO triplets (svec row, flat
    variable column, coefficient).
    """

    label: str
    order: int
    row: np.ndarray
    col: np.ndarray
    val: np.ndarray
    const: np.ndarray

    def matrix(self, nvars: int) -> sp.csr_matrix:
        return sp.csr_matrix(
            (self.val, (self.row, self.col)), shape=(svec_size(self.order), nvars)
        )

    def evaluate(self, u: np.ndarray, nvars: int) -> np.ndarray:
        return svec_to_mat(self.matrix(nvars) @ u + self.const, self.order)

    def violation(self, u: np.ndarray, nvars: int) -> float:
        w = np.linalg.eigvalsh(self.evaluate(u, nvars))
        return float(max(0.0, -w[0]))


@dataclass(frozen=True)
class Objective:
    """min sum_b coeffs[b]' u_b + constant, coefficients in flat block coordinates."""

    coeffs: dict[str, np.ndarray]
    constant: float = 0.0


# ---------------------------------------------------------------------------
# the program


@dataclass(frozen=True)
class ConicProgram:
    kind: str
    blocks: tuple[VectorBlock | MatrixBlock, ...]
    objective: Objective
    eq_groups: tuple[RowGroup, ...]
    le_groups: tuple[RowGroup, ...]
    psd_groups: tuple[PsdGroup, ...] = ()
    meta: dict = field(default_factory=dict)

    @cached_property
    def offsets(self) -> dict[str, int]:
        off, out = 0, {}
        for b in self.blocks:
            out[b.name] = off
            off += b.flat_size
        return out

    @cached_property
    def nvars(self) -> int:
        return sum(b.flat_size for b in self.blocks)

    @property
    def is_sdp(self) -> bool:
        return len(self.psd_groups) > 0

    @cached_property
    def max_block_order(self) -> int:
        orders = [b.order for b in self.blocks if isinstance(b, MatrixBlock)]
        orders += [g.order for g in self.psd_groups]
        return max(orders, default=0)

    def block(self, name: str) -> VectorBlock | MatrixBlock:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)

    # -- flat vector <-> named values -------------------------------------

    def pack(self, values: dict[str, np.ndarray]) -> np.ndarray:
        """Flatten named block values (matrices given dense symmetric)."""
        u = np.zeros(self.nvars)
        for b in self.blocks:
            v = np.asarray(values[b.name], dtype=float)
            if isinstance(b, MatrixBlock):
                if v.ndim == 2:
                    v = mat_to_svec(v)
            u[self.offsets[b.name] : self.offsets[b.name] + b.flat_size] = v
        return u

    def unpack(self, u: np.ndarray) -> dict[str, np.ndarray]:
        """Named block values; matrix blocks come back dense symmetric."""
        out: dict[str, np.ndarray] = {}
        for b in self.blocks:
            chunk = u[self.offsets[b.name] : self.offsets[b.name] + b.flat_size]
            if isinstance(b, MatrixBlock):
                out[b.name] = svec_to_mat(chunk, b.order)
            else:
                out[b.name] = chunk.copy()
        return out

    def objective_vector(self) -> np.ndarray:
        c = np.zeros(self.nvars)
        for name, coeff in self.objective.coeffs.items():
            b = self.block(name)
            c[self.offsets[name] : self.offsets[name] + b.flat_size] = coeff
        return c

    def objective_value(self, u: np.ndarray) -> float:
        return float(self.objective_vector() @ u + self.objective.constant)

    # -- assembled forms ---------------------------------------------------

    @cached_property
    def assembled(self) -> "AssembledProgram":
        return AssembledProgram.build(self)

    def max_violation(self, values: dict[str, np.ndarray] | np.ndarray) -> float:
        """Largest constraint violation at a candidate point (all groups)."""
        u = values if isinstance(values, np.ndarray) else self.pack(values)
        worst = 0.0
        for g in (*self.eq_groups, *self.le_groups, *self.psd_groups):
            worst = max(worst, g.violation(u, self.nvars))
        return worst

    def violation_report(self, values: dict[str, np.ndarray] | np.ndarray) -> dict[str, float]:
        u = values if isinstance(values, np.ndarray) else self.pack(values)
        return {
            g.label: g.violation(u, self.nvars)
            for g in (*self.eq_groups, *self.le_groups, *self.psd_groups)
        }


@dataclass(frozen=True)
class AssembledProgram:
    """Sparse matrices shared by the LP and conic backends."""

    c: np.ndarray
    constant: float
    a_eq: sp.csc_matrix
    b_eq: np.ndarray
    a_le: sp.csc_matrix
    b_le: np.ndarray
    psd: tuple[PsdGroup, ...]

    @staticmethod
    def build(p: ConicProgram) -> "AssembledProgram":
        def stack(groups: tuple[RowGroup, ...]) -> tuple[sp.csc_matrix, np.ndarray]:
            rows, cols, vals, rhs = [], [], [], []
            off = 0
            for g in groups:
                rows.append(g.row + off)
                cols.append(g.col)
                vals.append(g.val)
                rhs.append(g.rhs)
                off += g.nrows
            if not rows:
                return sp.csc_matrix((0, p.nvars)), np.zeros(0)
            a = sp.csc_matrix(
                (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                shape=(off, p.nvars),
            )
            return a, np.concatenate(rhs)

        a_eq, b_eq = stack(p.eq_groups)
        a_le, b_le = stack(p.le_groups)
        return AssembledProgram(
            c=p.objective_vector(),
            constant=p.objective.constant,
            a_eq=a_eq,
            b_eq=b_eq,
            a_le=a_le,
            b_le=b_le,
            psd=p.psd_groups,
        )


# ---------------------------------------------------------------------------
# group constructors (all vectorised; offsets are flat positions of blocks)


def vector_sum(label: str, offset: int, size: int, rhs: float) -> RowGroup:
    return RowGroup(
        label,
        "eq",
        np.zeros(size, dtype=int),
        offset + np.arange(size),
        np.ones(size),
        np.array([rhs]),
    )


def pin_entry(label: str, offset: int, index: int, value: float) -> RowGroup:
    return RowGroup(
        label,
        "eq",
        np.zeros(1, dtype=int),
        np.array([offset + index]),
        np.ones(1),
        np.array([value]),
    )


def coupling_rows(
    label: str, terms: list[tuple[int, float]], size: int, rhs: float
) -> RowGroup:
    """sum_t coeff_t * x^t_i = rhs for every i; terms are (offset, coeff)."""
    rows = np.concatenate([np.arange(size)] * len(terms))
    cols = np.concatenate([off + np.arange(size) for off, _ in terms])
    vals = np.concatenate([np.full(size, cf) for _, cf in terms])
    return RowGroup(label, "eq", rows, cols, vals, np.full(size, rhs))


def mat_row_sums(
    label: str,
    m_offset: int,
    order: int,
    x_offset: int | None = None,
    x_factor: float = 0.0,
    rhs_value: float = 0.0,
) -> RowGroup:
    """M 1 - x_factor * x = rhs_value * 1 (N rows)."""
    i = np.repeat(np.arange(order), order)
    j = np.tile(np.arange(order), order)
    rows = [i]
    cols = [m_offset + svec_index(order, i, j)]
    vals = [np.ones(order * order)]
    if x_offset is not None:
        rows.append(np.arange(order))
        cols.append(x_offset + np.arange(order))
        vals.append(np.full(order, -x_factor))
    return RowGroup(
        label,
        "eq",
        np.concatenate(rows),
        np.concatenate(cols),
        np.concatenate(vals),
        np.full(order, rhs_value),
    )


def diag_rows(label: str, m_offset: int, order: int, value: float) -> RowGroup:
    idx = np.arange(order)
    return RowGroup(
        label,
        "eq",
        idx,
        m_offset + svec_index(order, idx, idx),
        np.ones(order),
        np.full(order, value),
    )


def trace_row(label: str, m_offset: int, order: int, value: float) -> RowGroup:
    idx = np.arange(order)
    return RowGroup(
        label,
        "eq",
        np.zeros(order, dtype=int),
        m_offset + svec_index(order, idx, idx),
        np.ones(order),
        np.array([value]),
    )


def sym_pair_rows(
    label: str,
    m_offset: int,
    order: int,
    m_coeff: float,
    x_offset: int | None,
    x_coeff: float,
    rhs: float,
) -> RowGroup:
    """Rows over unordered pairs i <= j: m_coeff*M_ij + x_coeff*(x_i + x_j) <= rhs.

    On the diagonal the two x terms coincide, producing coefficient
    2*x_coeff via duplicate summation.
    """
    iu, ju = svec_pairs(order)
    t = len(iu)
    p = np.arange(t)
    rows = [p]
    cols = [m_offset + p]
    vals = [np.full(t, m_coeff)]
    if x_offset is not None:
        rows += [p, p]
        cols += [x_offset + iu, x_offset + ju]
        vals += [np.full(t, x_coeff), np.full(t, x_coeff)]
    return RowGroup(
        label,
        "le",
        np.concatenate(rows),
        np.concatenate(cols),
        np.concatenate(vals),
        np.full(t, rhs),
    )


def ordered_pair_rows(
    label: str, m_offset: int, order: int, x_offset: int, rhs: float
) -> RowGroup:
    """M_ij + x_i - x_j <= rhs over all ordered pairs i != j (both orientations)."""
    iu, ju = svec_pairs(order)
    off = iu != ju
    po = np.flatnonzero(off)
    xio, xjo = iu[off], ju[off]
    t = len(po)
    rows = np.concatenate([np.arange(t)] * 3 + [t + np.arange(t)] * 3)
    cols = np.concatenate(
        [m_offset + po, x_offset + xio, x_offset + xjo] * 1
        + [m_offset + po, x_offset + xjo, x_offset + xio]
    )
    vals = np.concatenate(
        [np.ones(t), np.ones(t), -np.ones(t), np.ones(t), np.ones(t), -np.ones(t)]
    )
    return RowGroup(label, "le", rows, cols, vals, np.full(2 * t, rhs))


def elementwise_bounds(
    label: str, m_offset: int, order: int, lower: float | None, upper: float | None
) -> list[RowGroup]:
    """lower <= M_ij <= upper over unordered pairs, as '<=' row groups."""
    t = svec_size(order)
    p = np.arange(t)
    out = []
    if upper is not None:
        out.append(RowGroup(f"{label}<=ub", "le", p, m_offset + p, np.ones(t), np.full(t, upper)))
    if lower is not None:
        out.append(RowGroup(f"{label}>=lb", "le", p, m_offset + p, -np.ones(t), np.full(t, -lower)))
    return out


def vector_bounds(
    label: str, offset: int, size: int, lower: float | None, upper: float | None
) -> list[RowGroup]:
    p = np.arange(size)
    out = []
    if upper is not None:
        out.append(RowGroup(f"{label}<=ub", "le", p, offset + p, np.ones(size), np.full(size, upper)))
    if lower is not None:
        out.append(RowGroup(f"{label}>=lb", "le", p, offset + p, -np.ones(size), np.full(size, -lower)))
    return out


def schur_psd(label: str, m_offset: int, x_offset: int, order: int) -> PsdGroup:
    """[[M, x], [x', 1]] PSD, an order+1 slab."""
    big = order + 1
    iu, ju = svec_pairs(big)
    inner = ju < order  # (since iu <= ju, iu < order too)
    corner = (iu == order) & (ju == order)
    border = (ju == order) & (iu < order)
    rows = np.concatenate(
        [np.flatnonzero(inner), np.flatnonzero(border)]
    )
    cols = np.concatenate(
        [m_offset + svec_index(order, iu[inner], ju[inner]), x_offset + iu[border]]
    )
    vals = np.ones(len(rows))
    const = np.zeros(svec_size(big))
    const[np.flatnonzero(corner)] = 1.0
    return PsdGroup(label, big, rows, cols, vals, const)


def affine_psd(
    label: str, m_offset: int, order: int, scale: float, identity_shift: float
) -> PsdGroup:
    """identity_shift * I + scale * M  PSD (order-N slab on one matrix block)."""
    t = svec_size(order)
    p = np.arange(t)
    iu, ju = svec_pairs(order)
    const = np.zeros(t)
    const[iu == ju] = identity_shift
    return PsdGroup(label, order, p, m_offset + p, np.full(t, scale), const)


def validate_symmetric(a: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.abs(a).max()))
    if float(np.abs(a - a.T).max()) > tol * scale:
        raise InvalidInputError("matrix is not symmetric within tolerance")
    return (a + a.T) / 2.0
