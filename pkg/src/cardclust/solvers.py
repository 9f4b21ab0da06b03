"""LP and SDP backends plus the spectral shortcut for the eigenvalue relaxation.

The LP path hands the assembled program to HiGHS (interior point first,
dual simplex as a numerical fallback); the conic path feeds SCS, an
operator-splitting ADMM method over the PSD cone with Ruiz equilibration
and 1.5 over-relaxation.  Both backends are deterministic for a fixed
program and configuration.  ``solve_sdp`` accepts programs without PSD
blocks too, which gives an independent cross-check of the LP path.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import IO

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.optimize import linprog

from .errors import ResourceLimitError, SpecViolationError
from .programs import ConicProgram, svec_pairs, validate_symmetric
from .relaxations import RelaxationKind, RelaxationSolution


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and caps shared by both backends.

    ``seed`` is reserved: the current backends are deterministic and do
    not consume randomness.  ``max_order`` fails fast on programs whose
    matrix blocks would be too large to handle densely.
    """

    lp_feas_tol: float = 1e-8
    lp_gap_tol: float = 1e-8
    lp_max_iters: int = 200
    sdp_feas_tol: float = 1e-6
    sdp_gap_tol: float = 1e-6
    sdp_max_iters: int = 20_000
    scaling: bool = True
    seed: int = 0
    time_limit: float | None = None
    max_order: int = 600
    verbose: bool = False
    log_stream: IO[str] | None = None

    def __post_init__(self) -> None:
        for field_name in ("lp_feas_tol", "lp_gap_tol", "sdp_feas_tol", "sdp_gap_tol"):
            if getattr(self, field_name) <= 0:
                raise SpecViolationError(f"{field_name} must be positive")
        if self.lp_max_iters < 1 or self.sdp_max_iters < 1:
            raise SpecViolationError("iteration caps must be >= 1")


DEFAULT_CONFIG = SolverConfig()


def _check_order(program: ConicProgram, config: SolverConfig) -> None:
    if program.max_block_order > config.max_order:
        raise ResourceLimitError(
            f"matrix block order {program.max_block_order} exceeds configured cap "
            f"{config.max_order}"
        )


def _log(config: SolverConfig, line: str) -> None:
    if config.log_stream is not None:
        config.log_stream.write(line + "\n")


def _solution(program, blocks, objective, status, **kw) -> RelaxationSolution:
    kind = program.meta.get("kind")
    if not isinstance(kind, RelaxationKind):
        kind = None
    return RelaxationSolution(
        kind=kind, program=program, blocks=blocks, objective=objective, status=status, **kw
    )


# ---------------------------------------------------------------------------
# LP backend (HiGHS)

_LP_STATUS = {0: "optimal", 1: "max-iterations", 2: "infeasible", 3: "numerical-failure", 4: "numerical-failure"}


def solve_lp(program: ConicProgram, config: SolverConfig = DEFAULT_CONFIG) -> RelaxationSolution:
    """Solve a program without PSD blocks to high accuracy.

    Interior point is tried first (the sign-cut polytopes are dense and
    highly degenerate, which simplex handles poorly); on a numerical
    failure the dual simplex is used as fallback.
    """
    if program.is_sdp:
        raise SpecViolationError("solve_lp requires a program without PSD blocks")
    _check_order(program, config)
    asm = program.assembled
    t0 = time.perf_counter()
    options = {
        "presolve": True,
        "primal_feasibility_tolerance": config.lp_feas_tol,
        "dual_feasibility_tolerance": config.lp_feas_tol,
        "ipm_optimality_tolerance": max(config.lp_gap_tol, 1e-12),
        "maxiter": config.lp_max_iters,
        "disp": config.verbose,
    }
    if config.time_limit is not None:
        options["time_limit"] = config.time_limit
    res = linprog(
        asm.c,
        A_ub=asm.a_le if asm.a_le.shape[0] else None,
        b_ub=asm.b_le if asm.a_le.shape[0] else None,
        A_eq=asm.a_eq if asm.a_eq.shape[0] else None,
        b_eq=asm.b_eq if asm.a_eq.shape[0] else None,
        bounds=(None, None),
        method="highs-ipm",
        options=options,
    )
    used = "highs-ipm"
    if res.status == 4:
        options.pop("ipm_optimality_tolerance")
        options["maxiter"] = max(config.lp_max_iters * 1000, 20_000)
        res = linprog(
            asm.c,
            A_ub=asm.a_le if asm.a_le.shape[0] else None,
            b_ub=asm.b_le if asm.a_le.shape[0] else None,
            A_eq=asm.a_eq if asm.a_eq.shape[0] else None,
            b_eq=asm.b_eq if asm.a_eq.shape[0] else None,
            bounds=(None, None),
            method="highs",
            options=options,
        )
        used = "highs"
    elapsed = time.perf_counter() - t0
    status = _LP_STATUS.get(res.status, "numerical-failure")

    if res.x is None:
        _log(config, f"lp backend={used} status={status} iters=? (no iterate)")
        return _solution(
            program, {}, float("nan"), status,
            primal_residual=float("inf"), dual_residual=float("inf"), gap=float("inf"),
            solve_time=elapsed, info={"backend": used, "message": res.message},
        )

    u = np.asarray(res.x, dtype=float)
    objective = float(asm.c @ u + asm.constant)
    primal_res = program.max_violation(u)
    dual_res = float("nan")
    gap = float("nan")
    dual_obj = float("nan")
    if res.status == 0:
        y_eq = np.asarray(res.eqlin.marginals) if asm.a_eq.shape[0] else np.zeros(0)
        y_le = np.asarray(res.ineqlin.marginals) if asm.a_le.shape[0] else np.zeros(0)
        grad = asm.c.copy()
        if asm.a_eq.shape[0]:
            grad -= asm.a_eq.T @ y_eq
        if asm.a_le.shape[0]:
            grad -= asm.a_le.T @ y_le
        dual_res = float(np.abs(grad).max(initial=0.0))
        dual_obj = float(asm.b_eq @ y_eq + asm.b_le @ y_le) + asm.constant
        gap = abs(objective - dual_obj) / (1.0 + abs(objective))
    iters = int(res.nit) if res.nit is not None else 0
    _log(
        config,
        f"lp backend={used} status={status} iters={iters} "
        f"res_pri={primal_res:.3e} res_dual={dual_res:.3e} gap={gap:.3e}",
    )
    return _solution(
        program, program.unpack(u), objective, status,
        primal_residual=primal_res, dual_residual=dual_res, gap=gap,
        iterations=iters, solve_time=elapsed,
        info={"backend": used, "message": res.message, "dual_objective": dual_obj},
    )


# ---------------------------------------------------------------------------
# conic backend (SCS)


def _scs_data(program: ConicProgram):
    """SCS form: min c'u st Au + s = b, s in (zero x pos x psd...)."""
    asm = program.assembled
    parts_a = []
    parts_b = []
    if asm.a_eq.shape[0]:
        parts_a.append(asm.a_eq)
        parts_b.append(asm.b_eq)
    if asm.a_le.shape[0]:
        parts_a.append(asm.a_le)
        parts_b.append(asm.b_le)
    psd_orders = []
    for g in asm.psd:
        iu, ju = svec_pairs(g.order)
        scale = np.where(iu == ju, 1.0, np.sqrt(2.0))
        e = g.matrix(program.nvars)
        scaler = sp.diags(scale)
        parts_a.append(-scaler @ e)
        parts_b.append(scale * g.const)
        psd_orders.append(g.order)
    a = sp.vstack(parts_a, format="csc") if parts_a else sp.csc_matrix((0, program.nvars))
    b = np.concatenate(parts_b) if parts_b else np.zeros(0)
    cone = {"z": int(asm.a_eq.shape[0]), "l": int(asm.a_le.shape[0])}
    if psd_orders:
        cone["s"] = psd_orders
    return {"A": a, "b": b, "c": asm.c}, cone


def _scs_status(info: dict) -> str:
    val = int(info.get("status_val", -4))
    if val == 1:
        return "optimal"
    if val in (2, 0):
        return "max-iterations"
    if val in (-2, -7):
        return "infeasible"
    return "numerical-failure"


def solve_sdp(program: ConicProgram, config: SolverConfig = DEFAULT_CONFIG) -> RelaxationSolution:
    """Solve a conic program (PSD blocks allowed) with SCS.

    Matrix blocks of the result are symmetric by construction of the svec
    storage.  Residuals and the duality gap are the solver's scaled
    measures at the returned iterate.
    """
    import scs

    _check_order(program, config)
    data, cone = _scs_data(program)
    eps = min(config.sdp_feas_tol, config.sdp_gap_tol)
    kwargs = dict(
        eps_abs=eps,
        eps_rel=eps,
        max_iters=config.sdp_max_iters,
        normalize=config.scaling,
        alpha=1.5,
        verbose=config.verbose,
    )
    if config.time_limit is not None:
        kwargs["time_limit_secs"] = float(config.time_limit)
    t0 = time.perf_counter()
    solver = scs.SCS(data, cone, **kwargs)
    sol = solver.solve()
    elapsed = time.perf_counter() - t0
    info = sol["info"]
    status = _scs_status(info)
    u = np.asarray(sol["x"], dtype=float)
    if status in ("infeasible", "numerical-failure") or not np.all(np.isfinite(u)):
        _log(config, f"sdp backend=scs status={status}")
        return _solution(
            program, {}, float("nan"), status,
            primal_residual=float("inf"), dual_residual=float("inf"), gap=float("inf"),
            solve_time=elapsed, info={"backend": "scs", "scs": dict(info)},
        )
    objective = float(info["pobj"]) + program.assembled.constant
    _log(
        config,
        f"sdp backend=scs status={status} iters={int(info['iter'])} "
        f"res_pri={info['res_pri']:.3e} res_dual={info['res_dual']:.3e} gap={info['gap']:.3e}",
    )
    return _solution(
        program, program.unpack(u), objective, status,
        primal_residual=float(info["res_pri"]),
        dual_residual=float(info["res_dual"]),
        gap=float(info["gap"]),
        iterations=int(info["iter"]),
        solve_time=elapsed,
        info={
            "backend": "scs",
            "dual_objective": float(info["dobj"]) + program.assembled.constant,
            "scs": dict(info),
        },
    )


def solve_relaxation(program: ConicProgram, config: SolverConfig = DEFAULT_CONFIG) -> RelaxationSolution:
    """Dispatch to the LP or conic backend based on the program's cones."""
    if program.is_sdp:
        return solve_sdp(program, config)
    return solve_lp(program, config)


# ---------------------------------------------------------------------------
# symmetric eigensolver and the eigenvalue-relaxation shortcut


def sym_eig(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition A = V diag(w) V' of a symmetric matrix.

    Eigenvalues ascend; raises ``InvalidInputError`` on asymmetric input.
    """
    a = validate_symmetric(a)
    w, v = scipy.linalg.eigh(a)
    return w, v


def solve_pw2_spectral(gram: np.ndarray, k: int) -> float:
    """Optimal value of the bounded-eigenvalue relaxation, via eigenvalues.

    The feasible matrices fix eigenvalue 1 along the all-ones direction
    and distribute K-1 units of spectrum over the orthogonal complement,
    so the optimum keeps the top K-1 eigenvalues of the centred Gram
    matrix.  The generic conic solve of the same program is the normative
    definition; the two paths are cross-validated in the tests.
    """
    w = validate_symmetric(gram)
    n = w.shape[0]
    if not 1 <= k <= n:
        raise SpecViolationError(f"K={k} outside 1..{n}")
    ones = np.ones(n)
    row_mean = (w @ ones) / n
    centred = w - row_mean[:, None] - row_mean[None, :] + (ones @ row_mean) / n
    ev = np.linalg.eigvalsh(centred)
    top = ev[::-1][: k - 1].sum() if k > 1 else 0.0
    return float(np.trace(w) - (ones @ w @ ones) / n - top)
