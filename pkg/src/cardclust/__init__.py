"""Cardinality-constrained K-means clustering via conic relaxations.

The package bundles: exact geometric primitives and a capacitated
assignment solver; SDP/LP relaxations of the size-constrained clustering
problem (with balanced and outlier variants) plus baseline relaxations;
deterministic rounding schemes with recovery guarantees under perfect
separation; a Lloyd-style local-search baseline; an exhaustive oracle for
desk-scale instances; synthetic generators; and a CLI harness.
"""

from .assignment import solve_assignment
from .bennett import BennettResult, MultiStartReport, bennett, kmeanspp_centers, multistart_bennett
from .errors import (
    CardclustError,
    ConfigError,
    DegenerateClusterError,
    IngestError,
    InvalidInputError,
    PreconditionError,
    ResourceLimitError,
    SolverFailure,
    SpecViolationError,
)
from .geometry import centroids, cluster_cost, distance_matrix, gram_matrix, pairwise_cost
from .oracle import OracleResult, enumerate_optimal
from .relaxations import (
    RelaxationKind,
    RelaxationSolution,
    build_block_constraints,
    build_for_dataset,
    build_relaxation,
    embed_integral,
    lift_to_pw,
    to_assignment_space,
)
from .rounding import RoundingResult, round_balanced, round_general, round_outlier
from .solvers import SolverConfig, solve_lp, solve_pw2_spectral, solve_relaxation, solve_sdp, sym_eig
from .synth import (
    PlantedInstance,
    SeparationCertificate,
    generate_separated_instance,
    generate_stochastic_balls,
    separation_certificate,
    zscore,
)
from .types import CardinalitySpec, Clustering, DataSet
from .voronoi import VoronoiReport, check_voronoi_compatibility

__version__ = "0.1.0"

__all__ = [
    "BennettResult",
    "CardclustError",
    "CardinalitySpec",
    "Clustering",
    "ConfigError",
    "DataSet",
    "DegenerateClusterError",
    "IngestError",
    "InvalidInputError",
    "MultiStartReport",
    "OracleResult",
    "PlantedInstance",
    "PreconditionError",
    "RelaxationKind",
    "RelaxationSolution",
    "ResourceLimitError",
    "RoundingResult",
    "SeparationCertificate",
    "SolverConfig",
    "SolverFailure",
    "SpecViolationError",
    "VoronoiReport",
    "bennett",
    "build_block_constraints",
    "build_for_dataset",
    "build_relaxation",
    "centroids",
    "check_voronoi_compatibility",
    "cluster_cost",
    "distance_matrix",
    "embed_integral",
    "enumerate_optimal",
    "generate_separated_instance",
    "generate_stochastic_balls",
    "gram_matrix",
    "kmeanspp_centers",
    "lift_to_pw",
    "multistart_bennett",
    "pairwise_cost",
    "round_balanced",
    "round_general",
    "round_outlier",
    "separation_certificate",
    "solve_assignment",
    "solve_lp",
    "solve_pw2_spectral",
    "solve_relaxation",
    "solve_sdp",
    "sym_eig",
    "to_assignment_space",
    "zscore",
]
