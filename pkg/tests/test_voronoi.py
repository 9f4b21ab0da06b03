import numpy as np
import pytest

from cardclust import (
    CardinalitySpec,
    Clustering,
    DataSet,
    DegenerateClusterError,
    check_voronoi_compatibility,
    enumerate_optimal,
)
from conftest import random_dataset


def test_separated_pair():
    ds = DataSet(np.array([[0.0, 0.0], [0.0, 1.0], [5.0, 0.0], [5.0, 1.0]]))
    rep = check_voronoi_compatibility(ds, Clustering(((0, 1), (2, 3))))
    assert rep.all_separable
    assert rep.pair_separable[(0, 1)]


def test_interleaved_clusters_fail():
    ds = DataSet(np.array([[0.0, 0.0], [2.0, 0.0], [1.0, 0.0]]))
    rep = check_voronoi_compatibility(ds, Clustering(((0, 1), (2,))))
    assert not rep.all_separable


def test_coincident_points_fail_not_raise():
    ds = DataSet(np.array([[1.0, 1.0], [1.0, 1.0]]))
    rep = check_voronoi_compatibility(ds, Clustering(((0,), (1,))))
    assert not rep.all_separable


def test_empty_cluster_raises():
    ds = DataSet(np.array([[0.0, 0.0]]))
    with pytest.raises(DegenerateClusterError):
        check_voronoi_compatibility(ds, Clustering(((0,), ())))


def test_exact_optima_are_voronoi_compatible():
    # optimal clusterings always admit a separating hyperplane per pair
    for seed in range(8):
        rng = np.random.default_rng(seed)
        ds = random_dataset(rng, 10)
        k1 = int(rng.integers(1, 10))
        spec = CardinalitySpec((k1, 10 - k1)) if k1 < 10 else CardinalitySpec((10,))
        res = enumerate_optimal(ds, spec)
        assert check_voronoi_compatibility(ds, res.clustering).all_separable
