import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cardclust import (
    CardinalitySpec,
    InvalidInputError,
    ResourceLimitError,
    SolverConfig,
    SpecViolationError,
    build_for_dataset,
    gram_matrix,
    solve_lp,
    solve_pw2_spectral,
    solve_sdp,
    sym_eig,
)
from cardclust.programs import (
    ConicProgram,
    MatrixBlock,
    Objective,
    VectorBlock,
    affine_psd,
    diag_rows,
    inner_coeff,
    vector_bounds,
)
from cardclust.relaxations import RelaxationKind as RK
from conftest import random_dataset


def tiny_lp(c=(1.0,), lower=1.0):
    """min c'x subject to x >= lower."""
    blocks = (VectorBlock("x", len(c)),)
    le = tuple(vector_bounds("x", 0, len(c), lower, None))
    return ConicProgram("tiny", blocks, Objective({"x": np.asarray(c, float)}), (), le, (), {})


def unit_diag_sdp(order=3, cost=None):
    cost = np.eye(order) if cost is None else cost
    return ConicProgram(
        "unit-diag",
        (MatrixBlock("Z", order),),
        Objective({"Z": inner_coeff(cost)}),
        (diag_rows("diag=1", 0, order, 1.0),),
        (),
        (affine_psd("Z psd", 0, order, 1.0, 0.0),),
        {},
    )


def test_lp_simple_bound():
    sol = solve_lp(tiny_lp())
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(1.0, abs=1e-9)
    assert sol.primal_residual <= 1e-8 and sol.dual_residual <= 1e-7


def test_lp_rejects_psd_programs():
    with pytest.raises(SpecViolationError):
        solve_lp(unit_diag_sdp())


def test_lp_infeasible_detected():
    blocks = (VectorBlock("x", 1),)
    le = tuple(vector_bounds("lo", 0, 1, 1.0, None)) + tuple(vector_bounds("hi", 0, 1, None, 0.0))
    prog = ConicProgram("infeas", blocks, Objective({"x": np.ones(1)}), (), le, (), {})
    assert solve_lp(prog).status == "infeasible"


def test_sdp_unit_diag():
    sol = solve_sdp(unit_diag_sdp())
    assert sol.status == "optimal"
    assert sol.objective == pytest.approx(3.0, abs=1e-5)
    assert np.allclose(sol.blocks["Z"], sol.blocks["Z"].T)


def test_sdp_handles_lp_programs_and_agrees():
    rng = np.random.default_rng(0)
    ds = random_dataset(rng, 6)
    spec = CardinalitySpec((3, 3))
    prog = build_for_dataset(RK.R_LP, ds, spec)
    a = solve_lp(prog)
    b = solve_sdp(prog, SolverConfig(sdp_feas_tol=1e-8, sdp_gap_tol=1e-8, sdp_max_iters=100_000))
    assert a.objective == pytest.approx(b.objective, rel=1e-5)


def test_weak_duality_reported():
    sol = solve_lp(tiny_lp())
    assert sol.info["dual_objective"] <= sol.objective + 1e-8
    sdp = solve_sdp(unit_diag_sdp())
    assert sdp.info["dual_objective"] <= sdp.objective + 1e-4


def test_max_iterations_status_flagged():
    rng = np.random.default_rng(1)
    ds = random_dataset(rng, 6)
    prog = build_for_dataset(RK.R_SDP, ds, CardinalitySpec((3, 3)))
    sol = solve_sdp(prog, SolverConfig(sdp_max_iters=5))
    assert sol.status == "max-iterations"
    assert not sol.certified
    assert sol.blocks  # best iterate still available


def test_order_cap():
    rng = np.random.default_rng(2)
    ds = random_dataset(rng, 8)
    prog = build_for_dataset(RK.R_SDP, ds, CardinalitySpec((4, 4)))
    with pytest.raises(ResourceLimitError):
        solve_sdp(prog, SolverConfig(max_order=4))


def test_determinism_bit_identical():
    rng = np.random.default_rng(3)
    ds = random_dataset(rng, 7)
    spec = CardinalitySpec((4, 3))
    prog = build_for_dataset(RK.R_SDP, ds, spec)
    a = solve_sdp(prog)
    b = solve_sdp(prog)
    assert a.objective == b.objective
    for name in a.blocks:
        assert np.array_equal(a.blocks[name], b.blocks[name])
    pl = build_for_dataset(RK.R_LP, ds, spec)
    assert solve_lp(pl).objective == solve_lp(pl).objective


def test_config_validation():
    with pytest.raises(SpecViolationError):
        SolverConfig(lp_feas_tol=0.0)
    with pytest.raises(SpecViolationError):
        SolverConfig(sdp_max_iters=0)


def test_log_stream_summary_lines():
    import io

    stream = io.StringIO()
    solve_lp(tiny_lp(), SolverConfig(log_stream=stream))
    solve_sdp(unit_diag_sdp(), SolverConfig(log_stream=stream))
    lines = stream.getvalue().strip().splitlines()
    assert len(lines) == 2
    assert all("res_pri=" in ln and "gap=" in ln for ln in lines)


# ---------------------------------------------------------------------------
# eigensolver and the spectral shortcut


def test_sym_eig_examples():
    w, v = sym_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(w, [1.0, 2.0, 3.0])
    w, _ = sym_eig(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(w, [-1.0, 1.0])


def test_sym_eig_rejects_asymmetric():
    with pytest.raises(InvalidInputError):
        sym_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_sym_eig_reconstruction_and_orthogonality(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((20, 20))
    a = (a + a.T) / 2
    w, v = sym_eig(a)
    assert np.all(np.diff(w) >= 0)
    assert np.abs(v.T @ v - np.eye(20)).max() < 1e-10
    assert np.abs(v @ np.diag(w) @ v.T - a).max() < 1e-8 * max(1.0, np.abs(a).max())


def test_pw2_spectral_k_equals_n():
    rng = np.random.default_rng(4)
    w = gram_matrix(random_dataset(rng, 6))
    assert solve_pw2_spectral(w, 6) == pytest.approx(0.0, abs=1e-9)


def test_pw2_spectral_bounds():
    with pytest.raises(SpecViolationError):
        solve_pw2_spectral(np.eye(3), 0)
    with pytest.raises(SpecViolationError):
        solve_pw2_spectral(np.eye(3), 4)


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_pw2_spectral_matches_generic_sdp(seed, tight_config):
    # the generic conic solve is the normative definition of this value
    rng = np.random.default_rng(seed)
    ds = random_dataset(rng, 10)
    k = int(rng.integers(1, 5))
    spec = CardinalitySpec((10 - k + 1,) + (1,) * (k - 1))
    prog = build_for_dataset(RK.PW2, ds, spec)
    sdp_value = solve_sdp(prog, tight_config).objective
    spectral = solve_pw2_spectral(gram_matrix(ds), k)
    assert spectral == pytest.approx(sdp_value, rel=1e-5, abs=1e-5)
