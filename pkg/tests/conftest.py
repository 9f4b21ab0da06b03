import os
from pathlib import Path

import numpy as np
import pytest

from cardclust import CardinalitySpec, DataSet, SolverConfig
from cardclust.cli import ingest_csv

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
FIXTURE_DIR = Path(__file__).resolve().parent / "data"


def remark2_dataset(a: float = 1.0, b: float = 2.0) -> DataSet:
    """The four corner points of the a x b rectangle (adversarial local optimum)."""
    return DataSet(np.array([[0.0, 0.0], [a, 0.0], [a, b], [0.0, b]]))


@pytest.fixture(scope="session")
def remark2():
    return remark2_dataset(), CardinalitySpec((2, 2))


@pytest.fixture(scope="session")
def iris():
    dataset, labels = ingest_csv(DATA_DIR / "iris.csv", label_column="label")
    return dataset, labels


@pytest.fixture(scope="session")
def tight_config():
    """Conic tolerance tight enough for the ordering-chain assertions.

    Desk-scale programs converge in a few hundred ADMM iterations even at
    this accuracy, and the objective error drops well below the 1e-6
    bound-consistency margin of the rounding results.
    """
    return SolverConfig(sdp_feas_tol=1e-9, sdp_gap_tol=1e-9, sdp_max_iters=1_000_000)


def random_dataset(rng: np.random.Generator, n: int, d: int = 2) -> DataSet:
    return DataSet(rng.standard_normal((n, d)))


def random_sizes(rng: np.random.Generator, n: int, k: int) -> tuple[int, ...]:
    """Uniform composition of n into k positive parts."""
    cuts = np.sort(rng.choice(np.arange(1, n), size=k - 1, replace=False)) if k > 1 else np.array([], dtype=int)
    bounds = np.concatenate([[0], cuts, [n]])
    return tuple(int(b - a) for a, b in zip(bounds[:-1], bounds[1:]))
