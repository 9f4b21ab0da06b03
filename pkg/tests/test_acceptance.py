"""Acceptance criteria, one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``.  Criterion 7 (the full
Iris benchmark row) takes a few minutes and carries the ``iris`` marker so
it can be deselected with ``-m "not iris"`` when iterating.
"""

import time

import numpy as np
import pytest

from cardclust import (
    CardinalitySpec,
    Clustering,
    DataSet,
    SolverConfig,
    bennett,
    build_for_dataset,
    centroids,
    cluster_cost,
    distance_matrix,
    embed_integral,
    enumerate_optimal,
    generate_separated_instance,
    gram_matrix,
    lift_to_pw,
    multistart_bennett,
    round_balanced,
    round_outlier,
    solve_lp,
    solve_pw2_spectral,
    solve_relaxation,
    solve_sdp,
)
from cardclust.cli import elbow_scan
from cardclust.relaxations import RelaxationKind as RK
from conftest import random_dataset, random_sizes

TIGHT = SolverConfig(sdp_feas_tol=1e-9, sdp_gap_tol=1e-9, sdp_max_iters=1_000_000)


def report(criterion: str, detail: str) -> None:
    print(f"\nACCEPTANCE {criterion}: PASS  ({detail})")


def tol_of(*values: float) -> float:
    return 1e-5 * (1.0 + max(abs(v) for v in values))


@pytest.fixture(scope="module")
def chain_ensemble():
    """50 seeded instances, N in [6, 12], K in {2, 3}; every even index is
    balanced so the balanced comparisons have a subset to run on."""
    instances = []
    for idx in range(50):
        rng = np.random.default_rng(1000 + idx)
        k = int(rng.integers(2, 4))
        if idx % 2 == 0:
            n_per = int(rng.integers(2, 12 // k + 1))
            sizes = (n_per,) * k
        else:
            n = int(rng.integers(6, 13))
            sizes = random_sizes(rng, n, k)
        ds = random_dataset(rng, sum(sizes), d=int(rng.integers(2, 4)))
        instances.append((idx, ds, CardinalitySpec(sizes)))
    return instances


@pytest.fixture(scope="module")
def chain_values(chain_ensemble):
    values = []
    for idx, ds, spec in chain_ensemble:
        d, w = distance_matrix(ds), gram_matrix(ds)
        entry = {
            "idx": idx,
            "ds": ds,
            "spec": spec,
            "naive": solve_lp(build_for_dataset(RK.NAIVE_L, ds, spec), TIGHT).objective,
            "rlp": solve_lp(build_for_dataset(RK.R_LP, ds, spec), TIGHT).objective,
            "exact": enumerate_optimal(ds, spec).cost,
            "pw1": solve_sdp(build_for_dataset(RK.PW1, ds, spec), TIGHT).objective,
        }
        entry["rsdp_sol"] = solve_sdp(build_for_dataset(RK.R_SDP, ds, spec), TIGHT)
        entry["rsdp"] = entry["rsdp_sol"].objective
        if spec.balanced:
            entry["rsdp_b"] = solve_sdp(build_for_dataset(RK.R_SDP_B, ds, spec), TIGHT).objective
            entry["pw1_b"] = solve_sdp(build_for_dataset(RK.PW1_B, ds, spec), TIGHT).objective
        values.append(entry)
    return values


def test_criterion_1_ordering_chain(chain_values):
    t0 = time.perf_counter()
    for v in chain_values:
        tol = tol_of(v["naive"], v["rlp"], v["rsdp"], v["exact"])
        assert v["naive"] <= v["rlp"] + tol, f"instance {v['idx']}"
        assert v["rlp"] <= v["rsdp"] + tol, f"instance {v['idx']}"
        assert v["rsdp"] <= v["exact"] + tol, f"instance {v['idx']}"
    report("1 ordering chain", f"50 instances in {time.perf_counter() - t0:.0f}s of shared solves")


def test_criterion_2_pw_dominance_and_lift(chain_values):
    balanced = 0
    for v in chain_values:
        tol = tol_of(v["rsdp"], v["pw1"])
        assert v["rsdp"] >= v["pw1"] - tol, f"instance {v['idx']}"
        if "pw1_b" in v:
            balanced += 1
            tol_b = tol_of(v["rsdp_b"], v["pw1_b"])
            assert v["rsdp_b"] >= v["pw1_b"] - tol_b, f"instance {v['idx']}"
        # the lift of the optimal per-cluster solution is feasible for the
        # single-matrix relaxation and preserves the objective
        z = lift_to_pw(v["rsdp_sol"], v["spec"], feas_tol=1e-5)
        n = v["ds"].n
        assert np.linalg.eigvalsh(z).min() >= -1e-6
        assert z.min() >= -1e-6
        assert np.abs(z.sum(axis=1) - 1.0).max() <= 1e-6
        assert abs(np.trace(z) - v["spec"].k) <= 1e-6
        w = gram_matrix(v["ds"])
        lifted_obj = float(np.trace(w @ (np.eye(n) - z)))
        assert lifted_obj == pytest.approx(v["rsdp"], rel=1e-5, abs=1e-7)
    report("2 PW dominance + lift", f"50 instances, {balanced} balanced")


def test_criterion_3_pw1_aw_equivalence():
    for seed in range(20):
        rng = np.random.default_rng(2000 + seed)
        n = int(rng.integers(5, 11))
        k = int(rng.integers(2, 4))
        ds = random_dataset(rng, n)
        spec = CardinalitySpec(random_sizes(rng, n, k))
        pw1 = solve_sdp(build_for_dataset(RK.PW1, ds, spec), TIGHT).objective
        aw = solve_sdp(build_for_dataset(RK.AW, ds, spec), TIGHT).objective
        assert pw1 == pytest.approx(0.5 * aw, rel=1e-5, abs=1e-7), f"seed {seed}"
    # objective identity on random symmetric unit-row-sum matrices
    for seed in range(100):
        rng = np.random.default_rng(3000 + seed)
        n = int(rng.integers(3, 16))
        ds = random_dataset(rng, n, d=3)
        d, w = distance_matrix(ds), gram_matrix(ds)
        s = rng.standard_normal((n, n))
        s = (s + s.T) / 2
        p = np.eye(n) - np.full((n, n), 1.0 / n)
        z = 0.5 * np.eye(n) + 0.5 * np.full((n, n), 1.0 / n) + 0.05 * (p @ s @ p)
        lhs = float(np.trace(w @ (np.eye(n) - z)))
        rhs = 0.5 * float((d * z).sum())
        scale = max(1.0, abs(lhs))
        assert abs(lhs - rhs) <= 1e-9 * scale, f"seed {seed}"
    report("3 equivalence + identity", "20 SDP pairs, 100 algebraic checks")


def test_criterion_4_perfect_recovery_balanced():
    recovered = 0
    for draw in range(25):
        rng = np.random.default_rng(4000 + draw)
        k = int(rng.integers(2, 5))
        n = int(rng.integers(2, {2: 16, 3: 11, 4: 8}[k]))
        margin = float(rng.uniform(1.2, 3.0))
        inst = generate_separated_instance(k, n, 0, dim=max(2, k - 1), margin=margin, seed=4000 + draw)
        assert inst.satisfies_s
        planted_cost = cluster_cost(inst.dataset, inst.clustering, inst.spec())
        lp = solve_lp(build_for_dataset(RK.R_LP_B, inst.dataset, inst.spec()), TIGHT)
        assert lp.objective == pytest.approx(planted_cost, rel=1e-6, abs=1e-9), f"draw {draw}"
        res = round_balanced(inst.dataset, n, k, RK.R_LP_B, TIGHT)
        assert sorted(res.clustering.clusters) == sorted(inst.clustering.clusters), f"draw {draw}"
        recovered += 1
    assert recovered == 25
    report("4 perfect recovery", "25/25 planted balanced instances recovered exactly")


def test_criterion_5_outlier_recovery():
    recovered = 0
    for draw in range(25):
        rng = np.random.default_rng(5000 + draw)
        k = int(rng.integers(2, 4))
        n = int(rng.integers(2, 6))
        n_0 = int(rng.integers(2, 5))
        margin = float(rng.uniform(1.2, 3.0))
        inst = generate_separated_instance(k, n, n_0, dim=2, margin=margin, seed=5000 + draw)
        assert inst.satisfies_s_prime
        planted_cost = cluster_cost(inst.dataset, inst.clustering, inst.spec())
        lp = solve_lp(build_for_dataset(RK.R_LP_OB, inst.dataset, inst.spec()), TIGHT)
        assert lp.objective == pytest.approx(planted_cost, rel=1e-6, abs=1e-9), f"draw {draw}"
        res = round_outlier(inst.dataset, inst.spec(), RK.R_LP_OB, TIGHT)
        assert res.clustering.outliers == inst.clustering.outliers, f"draw {draw}"
        assert sorted(res.clustering.clusters) == sorted(inst.clustering.clusters), f"draw {draw}"
        recovered += 1
    assert recovered == 25
    report("5 outlier recovery", "25/25 planted instances, outliers and clusters exact")


def test_criterion_6_adversarial_rectangle(remark2):
    ds, spec = remark2
    exact = enumerate_optimal(ds, spec)
    assert exact.cost == pytest.approx(1.0, abs=1e-9)
    trap = Clustering(((0, 3), (1, 2)))
    local = bennett(ds, spec, centroids(ds, trap))
    assert local.cost == pytest.approx(4.0, abs=1e-9)
    assert local.clustering == trap
    rel_gap = (local.cost - exact.cost) / exact.cost
    assert rel_gap == pytest.approx(3.0, abs=1e-9)  # b^2/a^2 - 1 at a=1, b=2
    res = round_balanced(ds, 2, 2, RK.R_LP_B, TIGHT)
    assert res.upper_bound == pytest.approx(1.0, abs=1e-9)
    report("6 adversarial rectangle", "exact 1.0, trapped local search 4.0, gap 3")


@pytest.mark.iris
def test_criterion_7_iris_through_experiment_harness(iris):
    """The same benchmark row produced by the batch harness."""
    from cardclust.cli import ExperimentConfig, run_experiment

    dataset, labels = iris
    config = ExperimentConfig(
        dataset=dataset,
        spec=CardinalitySpec((50, 50, 50)),
        methods=["rlp_b:refine", "bennett:10", "pw1_b", "pw2"],
        labels=labels,
        solver=SolverConfig(sdp_feas_tol=1e-7, sdp_gap_tol=1e-7, sdp_max_iters=200_000),
        seed=0,
        source="data/iris.csv",
    )
    rows = {r.method: r for r in run_experiment(config)}
    assert rows["rlp_b:refine"].lower_bound == pytest.approx(78.8, rel=1e-2)
    # the LP peel alone lands higher; the documented extra centre-update
    # pass reaches the certified optimum
    assert rows["rlp_b:refine"].upper_bound == pytest.approx(81.4, rel=5e-3)
    assert rows["bennett:10"].upper_bound == pytest.approx(81.4, rel=5e-3)
    assert rows["bennett:10"].extra["cv"] == pytest.approx(0.0, abs=1e-6)
    assert rows["pw1_b"].lower_bound == pytest.approx(81.4, rel=5e-3)
    assert rows["pw2"].lower_bound == pytest.approx(15.2, rel=1e-2)
    for r in rows.values():
        if r.gap is not None:
            assert r.gap >= -1e-6
    report(
        "7b Iris via harness",
        ", ".join(
            f"{m}: LB={r.lower_bound and round(r.lower_bound, 1)} UB={r.upper_bound and round(r.upper_bound, 1)}"
            for m, r in rows.items()
        ),
    )


@pytest.mark.iris
def test_criterion_7_iris_benchmark_row(iris):
    dataset, labels = iris
    spec = CardinalitySpec((50, 50, 50))
    cfg = SolverConfig(sdp_feas_tol=1e-7, sdp_gap_tol=1e-7, sdp_max_iters=200_000)
    t0 = time.perf_counter()

    sdp_round = round_balanced(dataset, 50, 3, RK.R_SDP_B, cfg)
    assert sdp_round.lower_bound == pytest.approx(81.4, rel=5e-3)
    assert sdp_round.upper_bound == pytest.approx(81.4, rel=5e-3)
    assert sdp_round.upper_bound >= sdp_round.lower_bound - 1e-6 * (1 + abs(sdp_round.lower_bound))

    lp = solve_lp(build_for_dataset(RK.R_LP_B, dataset, spec), cfg)
    assert lp.objective == pytest.approx(78.8, rel=1e-2)

    pw1b = solve_sdp(build_for_dataset(RK.PW1_B, dataset, spec), cfg)
    assert pw1b.objective == pytest.approx(81.4, rel=5e-3)

    pw2 = solve_pw2_spectral(gram_matrix(dataset), 3)
    assert pw2 == pytest.approx(15.2, rel=1e-2)

    ms = multistart_bennett(dataset, spec, runs=10, seed=0)
    assert ms.best_cost == pytest.approx(81.4, rel=5e-3)

    elapsed = time.perf_counter() - t0
    report(
        "7 Iris row",
        f"SDP {sdp_round.lower_bound:.1f}/{sdp_round.upper_bound:.1f}, LP {lp.objective:.1f}, "
        f"PW1b {pw1b.objective:.1f}, PW2 {pw2:.1f}, local search {ms.best_cost:.1f} "
        f"in {elapsed:.0f}s",
    )


def test_criterion_8_elbow_selects_three_outliers():
    inst = generate_separated_instance(3, 5, 3, dim=2, margin=2.0, seed=11)
    assert inst.satisfies_s_prime
    res = elbow_scan(inst.dataset, 3, (1, 1, 1), [0, 3, 6, 9, 12], RK.R_LP_OB, TIGHT)
    assert res.chosen == 3
    report("8 elbow", f"curve {[(p[0], round(p[1], 3)) for p in res.curve]} -> n0*=3")


def test_criterion_9_property_suites():
    rng = np.random.default_rng(77)
    # dual-form cost agreement at 1e-9 relative
    for _ in range(20):
        n = int(rng.integers(2, 14))
        ds = random_dataset(rng, n, d=3)
        sizes = random_sizes(rng, n, int(rng.integers(1, min(3, n) + 1)))
        perm = rng.permutation(n)
        clusters, pos = [], 0
        for s in sizes:
            clusters.append(tuple(int(i) for i in perm[pos : pos + s]))
            pos += s
        clustering = Clustering(tuple(clusters))
        from cardclust import pairwise_cost

        a = cluster_cost(ds, clustering)
        b = pairwise_cost(distance_matrix(ds), clustering)
        assert abs(a - b) <= 1e-9 * max(1.0, abs(a))
    # exact optima are compatible with a Voronoi partition
    from cardclust import check_voronoi_compatibility, solve_assignment

    for seed in range(5):
        rng2 = np.random.default_rng(seed)
        ds = random_dataset(rng2, 10)
        res = enumerate_optimal(ds, CardinalitySpec((5, 5)))
        assert check_voronoi_compatibility(ds, res.clustering).all_separable
    # local search: monotone costs, feasible every sweep
    ds = random_dataset(rng, 15)
    spec = CardinalitySpec((5, 5, 5))
    from cardclust import kmeanspp_centers

    run = bennett(ds, spec, kmeanspp_centers(ds, 3, seed=1))
    assert (np.diff(run.costs) <= 1e-9).all()
    run.clustering.validate(15, spec)
    # assignment equals exhaustive enumeration (delegated to the unit suite
    # for breadth); spot-check one tie-heavy instance here
    pi = solve_assignment(np.zeros((6, 2)), CardinalitySpec((3, 3)))
    assert pi.argmax(axis=1).tolist() == [0, 0, 0, 1, 1, 1]
    # determinism of seeded paths: bit-identical report dictionaries
    from cardclust.cli import ExperimentConfig, run_experiment

    ds2 = random_dataset(np.random.default_rng(5), 8)
    config = dict(
        dataset=ds2, spec=CardinalitySpec((4, 4)), methods=["bennett:3", "rlp", "rsdp_b"], seed=9
    )
    rows_a = run_experiment(ExperimentConfig(**config))
    rows_b = run_experiment(ExperimentConfig(**config))
    strip = lambda rows: [{**r.as_dict(), "seconds": None} for r in rows]
    assert strip(rows_a) == strip(rows_b)
    report("9 property suites", "cost forms, Voronoi, local search, assignment, determinism")
