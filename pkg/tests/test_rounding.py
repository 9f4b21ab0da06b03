import numpy as np
import pytest

from cardclust import (
    CardinalitySpec,
    Clustering,
    DataSet,
    SolverConfig,
    SpecViolationError,
    cluster_cost,
    enumerate_optimal,
    round_balanced,
    round_general,
    round_outlier,
    generate_separated_instance,
)
from cardclust.relaxations import RelaxationKind as RK
from cardclust.rounding import _lloyd_step
from conftest import random_dataset, random_sizes


def test_remark2_general_kinds(remark2):
    ds, spec = remark2
    for kind in (RK.R_LP, RK.R_SDP):
        res = round_general(ds, spec, kind)
        assert res.clustering == Clustering(((0, 1), (2, 3)))
        assert res.upper_bound == pytest.approx(1.0, abs=1e-9)
        assert res.gap <= 1e-5


def test_remark2_balanced_kinds(remark2):
    ds, _ = remark2
    for kind in (RK.R_LP_B, RK.R_SDP_B):
        res = round_balanced(ds, 2, 2, kind)
        assert res.clustering == Clustering(((0, 1), (2, 3)))
        assert res.upper_bound == pytest.approx(1.0, abs=1e-9)


def test_general_single_cluster_degenerate():
    rng = np.random.default_rng(0)
    ds = random_dataset(rng, 5)
    spec = CardinalitySpec((5,))
    res = round_general(ds, spec, RK.R_LP)
    assert res.clustering == Clustering((tuple(range(5)),))
    cost = cluster_cost(ds, res.clustering, spec)
    assert res.upper_bound == pytest.approx(cost, abs=1e-9)
    assert res.lower_bound == pytest.approx(cost, rel=1e-7)


def test_kind_guards(remark2):
    ds, spec = remark2
    with pytest.raises(SpecViolationError):
        round_general(ds, spec, RK.R_LP_B)
    with pytest.raises(SpecViolationError):
        round_balanced(ds, 2, 2, RK.R_LP)
    with pytest.raises(SpecViolationError):
        round_balanced(ds, 3, 2, RK.R_LP_B)  # N != n K
    with pytest.raises(SpecViolationError):
        round_outlier(ds, spec, RK.R_LP)


def test_sandwich_against_oracle(tight_config):
    # LB <= exact optimum <= UB on desk-scale instances
    for seed in range(6):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(6, 11))
        k = int(rng.integers(2, 4))
        sizes = random_sizes(rng, n, k)
        ds = random_dataset(rng, n)
        spec = CardinalitySpec(sizes)
        exact = enumerate_optimal(ds, spec).cost
        for kind in (RK.R_LP, RK.R_SDP):
            res = round_general(ds, spec, kind, tight_config)
            tol = 1e-5 * (1.0 + abs(exact))
            assert res.lower_bound <= exact + tol
            assert exact <= res.upper_bound + tol
            assert res.upper_bound >= res.lower_bound - 1e-6 * (1 + abs(res.lower_bound))


def test_stochastic_balls_unequal_sizes_full_scale():
    # three unit balls at centre distance 4 with sizes (10, 20, 70): the LP
    # relaxation is tight on the realised sample and the general rounding
    # scheme returns the planted partition (observed, not theorem-backed)
    from cardclust import generate_stochastic_balls
    from cardclust.cli import recovery_accuracy

    inst = generate_stochastic_balls((10, 20, 70), 4.0, dim=2, seed=0)
    res = round_general(inst.dataset, CardinalitySpec((10, 20, 70)), RK.R_LP)
    labels = inst.clustering.labels(100)
    assert recovery_accuracy(labels, res.clustering) == 1.0
    assert res.gap <= 1e-6


def test_unequal_sizes_recovery_small():
    # strongly separated unbalanced instance: the general scheme recovers it
    inst = generate_separated_instance(3, 2, 0, dim=2, margin=3.0, seed=5)
    pts = inst.dataset.points
    sizes = (2, 3, 4)
    rng = np.random.default_rng(8)
    extra1 = pts[2] + 0.05 * rng.standard_normal((1, 2))
    extra2 = pts[4] + 0.05 * rng.standard_normal((2, 2))
    ds = DataSet(np.vstack([pts, extra1, extra2]))
    planted = Clustering(((0, 1), (2, 3, 6), (4, 5, 7, 8)))
    res = round_general(ds, CardinalitySpec(sizes), RK.R_LP)
    assert sorted(res.clustering.clusters) == sorted(planted.clusters)


def test_balanced_planted_recovery_equals_oracle(tight_config):
    inst = generate_separated_instance(3, 4, 0, dim=2, margin=2.0, seed=3)
    assert inst.satisfies_s
    res = round_balanced(inst.dataset, 4, 3, RK.R_LP_B, tight_config)
    exact = enumerate_optimal(inst.dataset, inst.spec())
    assert sorted(res.clustering.clusters) == sorted(exact.clustering.clusters)
    assert res.upper_bound == pytest.approx(exact.cost, rel=1e-9)
    assert res.gap <= 1e-6


def test_balanced_refine_flag(remark2):
    ds, _ = remark2
    res = round_balanced(ds, 2, 2, RK.R_LP_B, refine=True)
    assert res.info["refined"]
    assert res.upper_bound == pytest.approx(1.0, abs=1e-9)


def test_rounded_output_is_assignment_stable():
    # re-running the centre/assignment pass does not change the output
    rng = np.random.default_rng(9)
    ds = random_dataset(rng, 8)
    spec = CardinalitySpec((4, 4))
    res = round_general(ds, spec, RK.R_LP)
    again = _lloyd_step(ds, spec, res.clustering)
    assert again == res.clustering


def test_outlier_recovery_planted():
    inst = generate_separated_instance(3, 4, 3, dim=2, margin=2.0, seed=1)
    assert inst.satisfies_s_prime
    for kind in (RK.R_LP_OB, RK.R_LP_O):
        res = round_outlier(inst.dataset, inst.spec(), kind)
        assert res.clustering.outliers == inst.clustering.outliers
        assert sorted(res.clustering.clusters) == sorted(inst.clustering.clusters)
        assert res.gap <= 1e-6


def test_outlier_zero_count_delegates(remark2):
    ds, spec = remark2
    direct = round_general(ds, spec, RK.R_LP)
    via = round_outlier(ds, spec, RK.R_LP_O)
    assert via.clustering == direct.clustering
    assert via.upper_bound == pytest.approx(direct.upper_bound)


def test_outlier_all_but_k_removed():
    rng = np.random.default_rng(11)
    ds = random_dataset(rng, 7)
    spec = CardinalitySpec((1, 1), 5)
    res = round_outlier(ds, spec, RK.R_LP_O)
    assert res.upper_bound == pytest.approx(0.0, abs=1e-9)
    assert len(res.clustering.outliers) == 5


def test_balanced_sorting_ties_take_smallest_indices():
    # the peeling sort is stable, so equal scores resolve to smaller indices
    scores = np.array([1.0, 1.0, 0.0, 1.0, 0.0, 0.0])
    order = np.argsort(-scores, kind="stable")
    assert order[:3].tolist() == [0, 1, 3]
    # degenerate data: every clustering is optimal; output is deterministic
    ds = DataSet(np.ones((6, 2)))
    a = round_balanced(ds, 3, 2, RK.R_LP_B)
    b = round_balanced(ds, 3, 2, RK.R_LP_B)
    assert a.clustering == b.clustering
    assert a.upper_bound == 0.0 and a.lower_bound == pytest.approx(0.0, abs=1e-9)


def test_rounding_deterministic(remark2):
    ds, spec = remark2
    a = round_general(ds, spec, RK.R_LP)
    b = round_general(ds, spec, RK.R_LP)
    assert a.clustering == b.clustering and a.upper_bound == b.upper_bound
