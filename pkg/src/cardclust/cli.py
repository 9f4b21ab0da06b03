"""Batch command-line harness: ingestion, benchmarks, elbow scans, generators.

Subcommands
-----------
cluster   run one method on one dataset
bench     run a list of methods, emit a table and a JSON report
elbow     scan outlier counts and pick the elbow of the bound curve
synth     generate a synthetic instance and write it as CSV
oracle    exact optimum of a tiny instance

Method names: ``oracle``, ``bennett[:RUNS]``, the relaxation kinds
(``rlp``, ``rsdp``, ``rlp_b``, ``rsdp_b``, ``rlp_o``, ``rsdp_o``,
``rlp_ob``, ``rsdp_ob`` -- rounded to feasible clusterings with the
matching scheme; append ``:lb`` for the bound only, ``:refine`` for an
extra centre-update pass on the balanced kinds) and the baseline bounds
``naive_l``, ``pw1``, ``pw2``, ``pw1_b``, ``aw``.

Exit codes: 0 success, 2 configuration/ingest error, 3 solver failure,
4 resource limit.
"""

from __future__ import annotations

import argparse
import csv
import json
import platform
import sys
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .bennett import multistart_bennett
from .errors import (
    CardclustError,
    ConfigError,
    IngestError,
    ResourceLimitError,
    SolverFailure,
    SpecViolationError,
)
from .geometry import distance_matrix, gram_matrix
from .oracle import enumerate_optimal
from .relaxations import RelaxationKind, build_for_dataset, build_relaxation
from .rounding import round_balanced, round_general, round_outlier
from .solvers import SolverConfig, solve_pw2_spectral, solve_relaxation
from .synth import generate_separated_instance, generate_stochastic_balls, instance_to_csv
from .types import CardinalitySpec, Clustering, DataSet

# ---------------------------------------------------------------------------
# ingestion


def ingest_csv(
    path,
    label_column: str | int | None = None,
    delimiter: str = ",",
    header: bool = True,
) -> tuple[DataSet, np.ndarray | None]:
    """Read a numeric CSV into a dataset, optionally splitting off a label column.

    Empty cells and non-numeric features raise ``IngestError`` naming the
    offending row and column; labels must be integers.
    """
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh, delimiter=delimiter)
            rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    except OSError as exc:
        raise IngestError(f"{path}: {exc.strerror or exc}") from exc
    if not rows:
        raise IngestError(f"{path}: no data rows")
    names: list[str]
    if header:
        names = [cell.strip() for cell in rows[0]]
        rows = rows[1:]
        if not rows:
            raise IngestError(f"{path}: header only, no data rows")
    else:
        names = [str(j) for j in range(len(rows[0]))]
    label_idx: int | None = None
    if label_column is not None:
        if isinstance(label_column, int):
            label_idx = label_column
        else:
            if label_column not in names:
                raise IngestError(f"{path}: no column named {label_column!r}")
            label_idx = names.index(label_column)
    points = []
    labels = []
    for r, row in enumerate(rows, start=2 if header else 1):
        if len(row) != len(names):
            raise IngestError(f"{path}: row {r} has {len(row)} cells, expected {len(names)}")
        feats = []
        for j, cell in enumerate(row):
            cell = cell.strip()
            if not cell:
                raise IngestError(f"{path}: row {r}, column {names[j]!r} is empty")
            if j == label_idx:
                try:
                    value = float(cell)
                except ValueError as exc:
                    raise IngestError(
                        f"{path}: row {r}, label column {names[j]!r} is not numeric: {cell!r}"
                    ) from exc
                if value != int(value):
                    raise IngestError(f"{path}: row {r}, label {cell!r} is not an integer")
                labels.append(int(value))
            else:
                try:
                    feats.append(float(cell))
                except ValueError as exc:
                    raise IngestError(
                        f"{path}: row {r}, column {names[j]!r} is not numeric: {cell!r}"
                    ) from exc
        points.append(feats)
    dataset = DataSet(np.asarray(points))
    return dataset, (np.asarray(labels, dtype=int) if label_idx is not None else None)


def spec_from_labels(labels: np.ndarray) -> CardinalitySpec:
    values = sorted(set(int(v) for v in labels))
    n_0 = int((labels == -1).sum()) if -1 in values else 0
    sizes = tuple(int((labels == v).sum()) for v in values if v != -1)
    return CardinalitySpec(sizes, n_0)


# ---------------------------------------------------------------------------
# experiment configuration and rows


@dataclass
class ExperimentConfig:
    dataset: DataSet
    spec: CardinalitySpec
    methods: list[str]
    labels: np.ndarray | None = None
    solver: SolverConfig = field(default_factory=SolverConfig)
    seed: int = 0
    source: str = "<memory>"

    def __post_init__(self) -> None:
        if not self.methods:
            raise ConfigError("at least one method is required")
        self.spec.validate_for(self.dataset.n)


@dataclass
class ReportRow:
    method: str
    lower_bound: float | None = None
    upper_bound: float | None = None
    seconds: float = 0.0
    status: str = "optimal"
    accuracy: float | None = None
    extra: dict = field(default_factory=dict)

    @property
    def gap(self) -> float | None:
        if self.lower_bound is None or self.upper_bound is None:
            return None
        return (self.upper_bound - self.lower_bound) / max(1.0, abs(self.lower_bound))

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "lb": self.lower_bound,
            "ub": self.upper_bound,
            "gap": self.gap,
            "seconds": round(self.seconds, 3),
            "status": self.status,
            "accuracy": self.accuracy,
            **({"extra": self.extra} if self.extra else {}),
        }


def recovery_accuracy(labels: np.ndarray, clustering: Clustering) -> float:
    """Fraction of points matched under the best one-to-one class pairing."""
    predicted = clustering.labels(len(labels))
    p_classes = sorted(set(predicted.tolist()))
    t_classes = sorted(set(int(v) for v in labels))
    counts = np.zeros((len(p_classes), len(t_classes)))
    for a, pc in enumerate(p_classes):
        for b, tc in enumerate(t_classes):
            counts[a, b] = float(np.sum((predicted == pc) & (labels == tc)))
    rows, cols = linear_sum_assignment(-counts)
    return float(counts[rows, cols].sum()) / len(labels)


_LB_ONLY = {
    "naive_l": RelaxationKind.NAIVE_L,
    "pw1": RelaxationKind.PW1,
    "pw2": RelaxationKind.PW2,
    "pw1_b": RelaxationKind.PW1_B,
    "aw": RelaxationKind.AW,
}
_ROUNDED = {
    "rlp": RelaxationKind.R_LP,
    "rsdp": RelaxationKind.R_SDP,
    "rlp_b": RelaxationKind.R_LP_B,
    "rsdp_b": RelaxationKind.R_SDP_B,
    "rlp_o": RelaxationKind.R_LP_O,
    "rsdp_o": RelaxationKind.R_SDP_O,
    "rlp_ob": RelaxationKind.R_LP_OB,
    "rsdp_ob": RelaxationKind.R_SDP_OB,
}


def _status_of(solution, solver: SolverConfig) -> str:
    """Solver status for a report row; budget-limited solves read 'timeout'."""
    status = solution.status
    if status != "optimal" and solver.time_limit is not None:
        stopped_by_clock = "time_limit" in str(solution.info.get("scs", {}).get("status", ""))
        if stopped_by_clock or solution.solve_time >= solver.time_limit:
            return "timeout"
    return status


def _run_method(method: str, config: ExperimentConfig) -> ReportRow:
    dataset, spec = config.dataset, config.spec
    name, _, arg = method.partition(":")
    row = ReportRow(method=method)
    start = time.perf_counter()

    def finish(clustering: Clustering | None = None) -> ReportRow:
        row.seconds = time.perf_counter() - start
        if clustering is not None and config.labels is not None:
            row.accuracy = recovery_accuracy(config.labels, clustering)
        return row

    if name == "oracle":
        res = enumerate_optimal(dataset, spec)
        row.lower_bound = row.upper_bound = res.cost
        row.extra["enumerated"] = res.enumerated
        return finish(res.clustering)
    if name == "bennett":
        runs = int(arg) if arg else 10
        report = multistart_bennett(dataset, spec, runs=runs, seed=config.seed)
        row.upper_bound = report.best_cost
        row.extra["cv"] = report.coefficient_of_variation
        row.extra["run_costs"] = list(report.run_costs)
        return finish(report.best.clustering)
    if name == "pw2" and not arg:
        row.lower_bound = solve_pw2_spectral(gram_matrix(dataset), spec.k)
        row.status = "optimal"
        row.extra["path"] = "spectral"
        return finish()
    if name in _LB_ONLY:
        kind = _LB_ONLY[name]
        sol = solve_relaxation(build_for_dataset(kind, dataset, spec), config.solver)
        row.lower_bound = sol.objective
        row.status = _status_of(sol, config.solver)
        return finish()
    if name in _ROUNDED:
        kind = _ROUNDED[name]
        if arg == "lb":
            sol = solve_relaxation(build_for_dataset(kind, dataset, spec), config.solver)
            row.lower_bound = sol.objective
            row.status = _status_of(sol, config.solver)
            return finish()
        refine = arg == "refine"  # optional extra centre-update pass
        if kind in (RelaxationKind.R_LP, RelaxationKind.R_SDP):
            res = round_general(dataset, spec, kind, config.solver)
        elif kind in (RelaxationKind.R_LP_B, RelaxationKind.R_SDP_B):
            res = round_balanced(dataset, spec.sizes[0], spec.k, kind, config.solver, refine=refine)
        else:
            res = round_outlier(dataset, spec, kind, config.solver, refine=refine)
        row.lower_bound = res.lower_bound
        row.upper_bound = res.upper_bound
        row.status = "optimal" if res.certified else _status_of(res.relaxation, config.solver)
        return finish(res.clustering)
    raise ConfigError(f"unknown method {method!r}")


def run_experiment(config: ExperimentConfig) -> list[ReportRow]:
    """Run every requested method; individual failures become error rows."""
    rows = []
    for method in config.methods:
        try:
            rows.append(_run_method(method, config))
        except CardclustError as exc:
            rows.append(ReportRow(method=method, status=f"error: {exc}"))
    return rows


# ---------------------------------------------------------------------------
# elbow scan


@dataclass
class ElbowResult:
    chosen: int
    curve: list[tuple[int, float]]  # (n_0, bound)
    specs: dict[int, CardinalitySpec]


def _sizes_for(n_points: int, n_0: int, relative: tuple[int, ...]) -> tuple[int, ...] | None:
    body = n_points - n_0
    total = sum(relative)
    if body <= 0 or body % total != 0:
        return None
    unit = body // total
    return tuple(r * unit for r in relative)


_OUTLIER_BASE = {
    RelaxationKind.R_LP_O: RelaxationKind.R_LP,
    RelaxationKind.R_SDP_O: RelaxationKind.R_SDP,
    RelaxationKind.R_LP_OB: RelaxationKind.R_LP_B,
    RelaxationKind.R_SDP_OB: RelaxationKind.R_SDP_B,
}


def elbow_scan(
    dataset: DataSet,
    k: int,
    relative_sizes,
    n0_grid,
    kind: RelaxationKind = RelaxationKind.R_LP_OB,
    config: SolverConfig = SolverConfig(),
    *,
    flat_tol: float = 1e-6,
) -> ElbowResult:
    """Bound-vs-outlier-count curve plus the elbow pick.

    The elbow maximises the discrete curvature of the log-bound over the
    (possibly non-uniform) admissible grid; an essentially flat curve
    falls back to the smallest grid value.  Grid points that do not split
    the residual into integral sizes are dropped.
    """
    if kind not in _OUTLIER_BASE:
        raise SpecViolationError("elbow_scan expects an outlier relaxation kind")
    relative = tuple(int(r) for r in relative_sizes)
    if len(relative) != k or any(r <= 0 for r in relative):
        raise SpecViolationError(f"relative sizes {relative} unusable for K={k}")
    d = distance_matrix(dataset)
    curve = []
    specs = {}
    for n_0 in sorted(set(int(v) for v in n0_grid)):
        sizes = _sizes_for(dataset.n, n_0, relative)
        if sizes is None or n_0 < 0:
            continue
        spec = CardinalitySpec(sizes, n_0)
        use = kind if n_0 > 0 else _OUTLIER_BASE[kind]
        program = build_relaxation(use, d, None, spec)
        sol = solve_relaxation(program, config)
        curve.append((n_0, sol.objective))
        specs[n_0] = spec
    if not curve:
        raise SpecViolationError("no admissible outlier counts in the grid")
    if len(curve) < 3:
        return ElbowResult(curve[0][0], curve, specs)
    grid = np.array([p[0] for p in curve], dtype=float)
    vals = np.array([p[1] for p in curve], dtype=float)
    floor = 1e-12 * (1.0 + abs(vals[0]))
    logs = np.log(np.maximum(vals, floor))
    slopes = np.diff(logs) / np.diff(grid)
    curvature = slopes[1:] - slopes[:-1]  # positive where a steep decline flattens
    if curvature.max() <= flat_tol:
        return ElbowResult(curve[0][0], curve, specs)
    chosen = int(grid[1 + int(np.argmax(curvature))])
    return ElbowResult(chosen, curve, specs)


# ---------------------------------------------------------------------------
# command line


def _parse_spec(text: str, n0: int, dataset: DataSet, labels) -> CardinalitySpec:
    if text == "from-labels":
        if labels is None:
            raise ConfigError("--spec from-labels needs a labelled dataset")
        base = spec_from_labels(labels)
        return CardinalitySpec(base.sizes, max(base.outlier_count, n0))
    if text.startswith("balanced:"):
        k = int(text.split(":", 1)[1])
        return CardinalitySpec.balanced_spec(dataset.n, k, n0)
    try:
        sizes = tuple(int(tok) for tok in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"cannot parse --spec {text!r}") from exc
    return CardinalitySpec(sizes, n0)


def _solver_from_args(args) -> SolverConfig:
    kwargs = {}
    if args.tol is not None:
        kwargs["sdp_feas_tol"] = args.tol
        kwargs["sdp_gap_tol"] = args.tol
    if args.time_budget is not None:
        kwargs["time_limit"] = args.time_budget
    if getattr(args, "verbose", False):
        kwargs["verbose"] = True
    return SolverConfig(**kwargs)


def _environment() -> dict:
    import scipy
    import scs

    return {
        "python": platform.python_version(),
        "platform": platform.platform(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "scs": scs.__version__,
    }


def _emit_report(args, config: ExperimentConfig, rows: list[ReportRow]) -> None:
    width = max(len(r.method) for r in rows)
    header = f"{'method':<{width}}  {'LB':>12}  {'UB':>12}  {'gap':>9}  {'time[s]':>8}  status"
    print(header)
    print("-" * len(header))
    for r in rows:
        lb = f"{r.lower_bound:.6g}" if r.lower_bound is not None else "--"
        ub = f"{r.upper_bound:.6g}" if r.upper_bound is not None else "--"
        gap = f"{r.gap:.3g}" if r.gap is not None else "--"
        acc = f"  acc={r.accuracy:.3f}" if r.accuracy is not None else ""
        print(f"{r.method:<{width}}  {lb:>12}  {ub:>12}  {gap:>9}  {r.seconds:>8.2f}  {r.status}{acc}")
    if args.out:
        doc = {
            "config": {
                "source": config.source,
                "n": config.dataset.n,
                "dim": config.dataset.dim,
                "sizes": list(config.spec.sizes),
                "n0": config.spec.outlier_count,
                "methods": config.methods,
                "seed": config.seed,
            },
            "environment": _environment(),
            "rows": [r.as_dict() for r in rows],
        }
        with open(args.out, "w") as fh:
            json.dump(doc, fh, indent=2)
        print(f"report written to {args.out}")


def _load(args) -> tuple[DataSet, np.ndarray | None]:
    if not args.data:
        raise ConfigError("--data is required")
    return ingest_csv(args.data, label_column=args.label_column, delimiter=args.delimiter)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", help="input CSV file")
    p.add_argument("--label-column", default=None, help="name of the label column, if any")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--spec", default=None, help="'n1,n2,...', 'balanced:K' or 'from-labels'")
    p.add_argument("--n0", type=int, default=0, help="outlier count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None, help="conic solver tolerance")
    p.add_argument("--time-budget", type=float, default=None, help="seconds per solve")
    p.add_argument("--out", default=None, help="write a JSON report here")
    p.add_argument("--verbose", action="store_true")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="cardclust", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_cluster = sub.add_parser("cluster", help="run one method on one dataset")
    _add_common(p_cluster)
    p_cluster.add_argument("--method", required=True)

    p_bench = sub.add_parser("bench", help="run a list of methods")
    _add_common(p_bench)
    p_bench.add_argument("--methods", required=True, help="comma-separated method names")

    p_elbow = sub.add_parser("elbow", help="outlier-count elbow scan")
    _add_common(p_elbow)
    p_elbow.add_argument("--k", type=int, required=True)
    p_elbow.add_argument("--relative-sizes", default=None, help="e.g. 1,1,1")
    p_elbow.add_argument("--n0-grid", required=True, help="e.g. 0,3,6,9,12")
    p_elbow.add_argument("--kind", default="rlp_ob", choices=sorted(k.value for k in _OUTLIER_BASE))
    p_elbow.add_argument("--elbow-flat-tol", type=float, default=1e-6)
    p_elbow.add_argument("--curve-out", default=None, help="write the scan curve as CSV")

    p_synth = sub.add_parser("synth", help="generate a synthetic instance")
    p_synth.add_argument("--generator", choices=["balls", "separated"], required=True)
    p_synth.add_argument("--sizes", default=None, help="balls: cluster sizes, e.g. 10,20,70")
    p_synth.add_argument("--delta", type=float, default=4.0)
    p_synth.add_argument("--k", type=int, default=3)
    p_synth.add_argument("--n", type=int, default=4)
    p_synth.add_argument("--n0", type=int, default=0)
    p_synth.add_argument("--dim", type=int, default=2)
    p_synth.add_argument("--margin", type=float, default=2.0)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--out", required=True)

    p_oracle = sub.add_parser("oracle", help="exact optimum of a tiny instance")
    _add_common(p_oracle)
    p_oracle.add_argument("--max-partitions", type=int, default=2_000_000)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (ConfigError, IngestError, SpecViolationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverFailure as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 4


def _dispatch(args) -> int:
    if args.command == "synth":
        if args.generator == "balls":
            if not args.sizes:
                raise ConfigError("--sizes is required for the ball generator")
            sizes = tuple(int(t) for t in args.sizes.split(","))
            inst = generate_stochastic_balls(sizes, args.delta, args.dim, args.seed)
        else:
            inst = generate_separated_instance(
                args.k, args.n, args.n0, args.dim, args.margin, args.seed
            )
        instance_to_csv(inst, args.out)
        cert = inst.certificate
        print(
            f"wrote {inst.dataset.n} points to {args.out} "
            f"(satisfies_S={inst.satisfies_s}, satisfies_S'={inst.satisfies_s_prime}, "
            f"max_intra={cert.max_intra:.4g}, min_inter={cert.min_inter:.4g})"
        )
        return 0

    dataset, labels = _load(args)
    if args.command == "elbow":
        relative = (
            tuple(int(t) for t in args.relative_sizes.split(","))
            if args.relative_sizes
            else (1,) * args.k
        )
        grid = [int(t) for t in args.n0_grid.split(",")]
        result = elbow_scan(
            dataset,
            args.k,
            relative,
            grid,
            RelaxationKind(args.kind),
            _solver_from_args(args),
            flat_tol=args.elbow_flat_tol,
        )
        for n_0, bound in result.curve:
            print(f"n0={n_0:>4d}  bound={bound:.6g}")
        print(f"chosen n0* = {result.chosen}")
        if args.curve_out:
            with open(args.curve_out, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["n0", "bound"])
                writer.writerows(result.curve)
        return 0

    if args.spec is None:
        raise ConfigError("--spec is required")
    spec = _parse_spec(args.spec, args.n0, dataset, labels)

    if args.command == "oracle":
        res = enumerate_optimal(dataset, spec, max_partitions=args.max_partitions)
        print(f"optimal cost {res.cost!r} after {res.enumerated} partitions")
        for k, members in enumerate(res.clustering.clusters, start=1):
            print(f"  cluster {k}: {list(members)}")
        if res.clustering.outliers:
            print(f"  outliers: {list(res.clustering.outliers)}")
        return 0

    methods = [args.method] if args.command == "cluster" else args.methods.split(",")
    config = ExperimentConfig(
        dataset=dataset,
        spec=spec,
        methods=[m.strip() for m in methods if m.strip()],
        labels=labels,
        solver=_solver_from_args(args),
        seed=args.seed,
        source=str(args.data),
    )
    rows = run_experiment(config)
    _emit_report(args, config, rows)
    return 0 if all(not r.status.startswith("error") for r in rows) else 3


if __name__ == "__main__":
    sys.exit(main())
