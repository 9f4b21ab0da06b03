"""SDPA sparse-format export/import and a structured text dump.

Export targets the standard-form side of the SDPA pair,

    max <F0, Y>   s.t.  <Fi, Y> = c_i (i = 1..m),   Y >= 0 (block diagonal),

by splitting our free variables into two nonnegative diagonal blocks,
giving every inequality row a diagonal slack block, and tying each PSD
slab entrywise to its affine expression.  The additive objective constant
(which the format cannot carry) is stored in an ``*OFFSET`` comment; with
it, the optimal value of the written problem satisfies

    our optimum  =  -(SDPA maximum)  +  offset.

Import reads any .dat-s file back into a :class:`ConicProgram` in exactly
that orientation, so export -> import -> solve round-trips to the original
optimal value.  Files are meant for desk-scale cross-checking against
external solvers, not for large instances (the variable split doubles n).
"""

from __future__ import annotations

import numpy as np

from .errors import IngestError
from .programs import (
    ConicProgram,
    MatrixBlock,
    Objective,
    PsdGroup,
    RowGroup,
    VectorBlock,
    affine_psd,
    svec_pairs,
    svec_size,
    vector_bounds,
)


def export_sdpa(program: ConicProgram, path) -> None:
    asm = program.assembled
    nvar = program.nvars
    n_eq = asm.a_eq.shape[0]
    n_le = asm.a_le.shape[0]
    psd_sizes = [g.order for g in asm.psd]
    psd_rows = sum(svec_size(o) for o in psd_sizes)
    m = n_eq + n_le + psd_rows

    blocks: list[int] = list(psd_sizes)
    if n_le:
        blocks.append(-n_le)
    blocks += [-nvar, -nvar]
    slack_blk = len(psd_sizes) + 1 if n_le else None
    upos_blk = len(blocks) - 1  # 1-based below
    uneg_blk = len(blocks)

    lines: list[str] = []

    def entry(mat: int, blk: int, i: int, j: int, val: float) -> None:
        if val != 0.0:
            lines.append(f"{mat} {blk} {i} {j} {float(val)!r}")

    # objective F0: max <F0,Y> = -c'u
    for col, val in enumerate(asm.c):
        entry(0, upos_blk, col + 1, col + 1, -val)
        entry(0, uneg_blk, col + 1, col + 1, val)

    rhs = []
    row = 0
    for a_mat, b_vec, slack in ((asm.a_eq, asm.b_eq, False), (asm.a_le, asm.b_le, True)):
        coo = a_mat.tocoo()
        by_row: dict[int, list[tuple[int, float]]] = {}
        for r, c, v in zip(coo.row, coo.col, coo.data):
            by_row.setdefault(int(r), []).append((int(c), float(v)))
        for r in range(a_mat.shape[0]):
            row += 1
            for c, v in sorted(by_row.get(r, [])):
                entry(row, upos_blk, c + 1, c + 1, v)
                entry(row, uneg_blk, c + 1, c + 1, -v)
            if slack:
                entry(row, slack_blk, r + 1, r + 1, 1.0)
            rhs.append(float(b_vec[r]))
    for p, g in enumerate(asm.psd):
        iu, ju = svec_pairs(g.order)
        e = g.matrix(nvar).tocoo()
        by_row = {}
        for r, c, v in zip(e.row, e.col, e.data):
            by_row.setdefault(int(r), []).append((int(c), float(v)))
        for q in range(svec_size(g.order)):
            row += 1
            i, j = int(iu[q]), int(ju[q])
            entry(row, p + 1, i + 1, j + 1, 1.0 if i == j else 0.5)
            for c, v in sorted(by_row.get(q, [])):
                entry(row, upos_blk, c + 1, c + 1, -v)
                entry(row, uneg_blk, c + 1, c + 1, v)
            rhs.append(float(g.const[q]))

    with open(path, "w") as fh:
        fh.write(f'"exported conic program: kind={program.kind}\n')
        fh.write(f"*OFFSET {float(asm.constant)!r}\n")
        fh.write(f"{m}\n{len(blocks)}\n")
        fh.write(" ".join(str(b) for b in blocks) + "\n")
        fh.write(" ".join(repr(float(v)) for v in rhs) + "\n")
        fh.write("\n".join(lines) + "\n")


def import_sdpa(path) -> ConicProgram:
    """Read a .dat-s file as a minimisation over the PSD block variables.

    The returned program minimises ``-<F0, Y>`` plus any ``*OFFSET``
    comment value, subject to ``<Fi, Y> = c_i`` and blockwise PSD /
    nonnegativity.
    """
    offset = 0.0
    tokens: list[str] = []
    with open(path) as fh:
        for line in fh:
            stripped = line.strip()
            if stripped.startswith('"') or stripped.startswith("*"):
                if stripped.upper().startswith("*OFFSET"):
                    offset = float(stripped.split()[1])
                continue
            tokens.extend(stripped.replace(",", " ").replace("{", " ").replace("}", " ").split())
    if len(tokens) < 3:
        raise IngestError(f"{path}: truncated SDPA file")
    pos = 0

    def take(count: int) -> list[str]:
        nonlocal pos
        if pos + count > len(tokens):
            raise IngestError(f"{path}: unexpected end of file")
        out = tokens[pos : pos + count]
        pos += count
        return out

    m = int(take(1)[0])
    nblocks = int(take(1)[0])
    sizes = [int(t) for t in take(nblocks)]
    rhs = np.array([float(t) for t in take(m)])

    blocks: list[VectorBlock | MatrixBlock] = []
    psd: list[PsdGroup] = []
    le: list[RowGroup] = []
    for b, size in enumerate(sizes):
        name = f"Y{b + 1}"
        if size > 0:
            blocks.append(MatrixBlock(name, size))
        else:
            blocks.append(VectorBlock(name, -size))
    prog_stub = ConicProgram("sdpa-import", tuple(blocks), Objective({}), (), (), (), {})
    offs = prog_stub.offsets
    for b, size in enumerate(sizes):
        name = f"Y{b + 1}"
        if size > 0:
            psd.append(affine_psd(f"{name} psd", offs[name], size, 1.0, 0.0))
        else:
            le += vector_bounds(f"{name}", offs[name], -size, 0.0, None)

    obj_cols: dict[int, float] = {}
    eq_entries: dict[int, dict[int, float]] = {r: {} for r in range(m)}
    while pos + 5 <= len(tokens):
        mat, blk, i, j, val = take(5)
        mat, blk, i, j = int(mat), int(blk), int(i), int(j)
        v = float(val)
        size = sizes[blk - 1]
        name = f"Y{blk}"
        if size > 0:
            lo, hi = min(i, j) - 1, max(i, j) - 1
            flat = offs[name] + lo * size - lo * (lo - 1) // 2 + (hi - lo)
            coeff = v if i == j else 2.0 * v  # <F, Y> doubles off-diagonal terms
        else:
            if i != j:
                raise IngestError(f"{path}: off-diagonal entry in diagonal block {blk}")
            flat = offs[name] + i - 1
            coeff = v
        if mat == 0:
            obj_cols[flat] = obj_cols.get(flat, 0.0) + coeff
        else:
            row = eq_entries[mat - 1]
            row[flat] = row.get(flat, 0.0) + coeff
    if pos != len(tokens):
        raise IngestError(f"{path}: trailing tokens")

    rows, cols, vals = [], [], []
    for r in range(m):
        for c, v in sorted(eq_entries[r].items()):
            rows.append(r)
            cols.append(c)
            vals.append(v)
    eq = RowGroup(
        "sdpa:<Fi,Y>=c_i",
        "eq",
        np.array(rows, dtype=int),
        np.array(cols, dtype=int),
        np.array(vals),
        rhs,
    )
    coeffs: dict[str, np.ndarray] = {}
    full = np.zeros(prog_stub.nvars)
    for c, v in obj_cols.items():
        full[c] = -v  # minimise -<F0, Y>
    for b in blocks:
        off = offs[b.name]
        coeffs[b.name] = full[off : off + b.flat_size]
    return ConicProgram(
        "sdpa-import",
        tuple(blocks),
        Objective(coeffs, offset),
        (eq,),
        tuple(le),
        tuple(psd),
        {"source": str(path)},
    )


def program_summary(program: ConicProgram) -> str:
    """Self-describing dump of a program's structure, for debugging."""
    out = [f"conic program: kind={program.kind}  vars={program.nvars}"]
    for b in program.blocks:
        shape = f"matrix order {b.order}" if isinstance(b, MatrixBlock) else f"vector size {b.size}"
        out.append(f"  block {b.name}: {shape} ({b.flat_size} vars)")
    obj_nnz = sum(int(np.count_nonzero(c)) for c in program.objective.coeffs.values())
    out.append(f"  objective: {obj_nnz} nonzeros, constant {program.objective.constant!r}")
    for label, groups in (("equalities", program.eq_groups), ("inequalities", program.le_groups)):
        out.append(f"  {label}: {sum(g.nrows for g in groups)} rows")
        for g in groups:
            out.append(f"    [{g.sense}] {g.label}: {g.nrows} rows, {len(g.val)} entries")
    if program.psd_groups:
        out.append(f"  psd slabs: {len(program.psd_groups)}")
        for g in program.psd_groups:
            out.append(f"    {g.label}: order {g.order}")
    if program.meta:
        keys = ", ".join(sorted(str(k) for k in program.meta))
        out.append(f"  meta: {keys}")
    return "\n".join(out)
