"""Declarative experiment runner.

An ExperimentSpec fixes a graph family, boundary condition, length
distribution, spectral window and seed; run() executes it and writes
the CSV/JSON artifacts that the figure renderers consume.  Identical
spec + seed gives byte-identical output apart from the timestamp
comment line; every file embeds the resolved spec hash and seed.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import derived_constants, serialization as ser
from .entropy import entropy, normalized_entropy, variance, verify_bounds, weighted_length
from .errors import NumericalError
from .graphs import EdgeLengths, UniformLengths, girth, random_regular_graph, star_graph
from .quantum import find_eigenvalues, make_quantum_graph
from .star import (
    average_entropy_experiment,
    limit_density_P,
    localization_heuristic_check,
)

KINDS = ("spectrum", "entropy-histogram", "mean-entropy-vs-size",
         "star-average", "bounds-report", "localization")
FAMILIES = ("star", "regular")
BOUNDARIES = ("neumann", "equitransmitting")

THREADS_ENV = "QGRAPHS_THREADS"


@dataclass(frozen=True)
class ExperimentSpec:
    kind: str
    family: str = "star"
    sizes: tuple = (30,)
    degree: int = 6
    boundary: str = "neumann"
    length_lo: float = 2.0
    length_hi: float = 10.0
    force_lmax: float = None
    k_min: float = 1.0
    k_max: float = None
    n_eigen: int = 300
    tol: float = 1e-10
    seed: int = 1
    variant: str = derived_constants.M_PROFILE_DEFAULT
    out_dir: str = "."
    label: str = "experiment"
    threads: int = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown graph family {self.family!r}")
        if self.boundary not in BOUNDARIES:
            raise ValueError(f"unknown boundary {self.boundary!r}")
        if not self.sizes or any(int(s) <= 0 for s in self.sizes):
            raise ValueError("sizes must be positive")
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if not 0 < self.length_lo < self.length_hi:
            raise ValueError("need 0 < length_lo < length_hi")
        if self.k_max is not None and self.k_max <= self.k_min:
            raise ValueError("k_max must exceed k_min")
        if self.n_eigen is not None and self.n_eigen < 1:
            raise ValueError("n_eigen must be positive")

    def resolved(self) -> dict:
        doc = asdict(self)
        doc["sizes"] = list(self.sizes)
        return doc

    def hash(self) -> str:
        """Hash of the scientific content: output plumbing excluded."""
        doc = self.resolved()
        for key in ("out_dir", "label", "threads"):
            doc.pop(key)
        return ser.spec_hash(doc)

    def thread_count(self) -> int:
        if self.threads is not None:
            return max(1, self.threads)
        return max(1, int(os.environ.get(THREADS_ENV, "1")))


@dataclass(frozen=True)
class ExperimentResult:
    spec_hash: str
    paths: dict
    summary: dict
    violations: tuple = ()


def _cell_seeds(spec: ExperimentSpec):
    return np.random.SeedSequence(spec.seed).spawn(len(spec.sizes))


def _sample_cell_lengths(spec: ExperimentSpec, edge_count: int, seed_seq) -> EdgeLengths:
    rng = np.random.default_rng(seed_seq)
    dist = UniformLengths(spec.length_lo, spec.length_hi)
    draws = dist.sample(edge_count, rng)
    if spec.force_lmax is not None:
        over = draws >= spec.force_lmax
        while np.any(over):
            draws[over] = rng.uniform(spec.length_lo, spec.force_lmax, size=int(over.sum()))
            over = draws >= spec.force_lmax
        draws[int(np.argmax(draws))] = spec.force_lmax
    return EdgeLengths(draws)


def _build_cell(spec: ExperimentSpec, size: int, seed_seq):
    if spec.family == "star":
        g = star_graph(size)
    else:
        g = random_regular_graph(size, spec.degree, np.random.default_rng(seed_seq))
    lengths = _sample_cell_lengths(spec, g.edge_count, seed_seq.spawn(1)[0])
    return make_quantum_graph(g, lengths, spec.boundary)


def _window(spec: ExperimentSpec, total_length: float):
    if spec.k_max is not None:
        return spec.k_min, spec.k_max
    span = 1.2 * spec.n_eigen * math.pi / total_length
    return spec.k_min, spec.k_min + span


def _meta(spec: ExperimentSpec) -> dict:
    return {"spec-hash": spec.hash(), "seed": spec.seed, "code": ser.CODE_VERSION}


def _out(spec: ExperimentSpec, name: str) -> str:
    os.makedirs(spec.out_dir, exist_ok=True)
    return os.path.join(spec.out_dir, f"{spec.label}-{name}")


def _spectrum_cell(spec: ExperimentSpec, size: int, seed_seq):
    qg = _build_cell(spec, size, seed_seq)
    k_lo, k_hi = _window(spec, qg.total_length)
    records = find_eigenvalues(qg, k_lo, k_hi, tol=spec.tol)
    if spec.n_eigen is not None:
        records = records[:spec.n_eigen]
    return qg, records


def _entropy_columns(qg, records) -> dict:
    lb = qg.bond_length_vector
    cols = {"n": [], "k_n": [], "entropy": [], "normalized_entropy": [],
            "variance": [], "weighted_length": []}
    for rec in records:
        cols["n"].append(rec.index)
        cols["k_n"].append(rec.k)
        cols["entropy"].append(entropy(rec.a))
        cols["normalized_entropy"].append(normalized_entropy(rec.a))
        cols["variance"].append(variance(rec.a))
        cols["weighted_length"].append(weighted_length(rec.a, lb))
    return cols


def _bound_parameters(qg) -> dict:
    """Spectrum-constant bound thresholds carried for figure overlays."""
    from .entropy import _all_equitransmitting, _is_star  # internal reuse

    B = qg.bond_count
    out = {"bond_count": B}
    degs = qg.graph.degrees
    if qg.graph.vertex_count > 1 and np.all(degs == degs[0]) and _all_equitransmitting(qg):
        g = girth(qg.graph)
        if not math.isinf(g):
            out["girth_bound"] = g * math.log(int(degs[0]) - 1) / (4 * math.log(B))
    if _is_star(qg) and qg.smatrices[0].kind == "EquiTransmitting":
        out["et_star_bound"] = 0.5 * math.log(B - 2) / math.log(B)
    return out


def _run_cells(spec: ExperimentSpec, worker):
    seeds = _cell_seeds(spec)
    cells = list(zip(spec.sizes, seeds))
    workers = spec.thread_count()
    if workers > 1 and len(cells) > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda c: worker(*c), cells))
    return [worker(size, seq) for size, seq in cells]


# ---------------------------------------------------------------------------
# experiment kinds


def _run_spectrum(spec: ExperimentSpec, with_entropy_csv: bool):
    size = spec.sizes[0]
    qg, records = _spectrum_cell(spec, size, _cell_seeds(spec)[0])
    paths = {}
    graph_path = _out(spec, "graph.json")
    ser.save_quantum_graph(qg, graph_path)
    paths["graph"] = graph_path
    spectrum_path = _out(spec, "spectrum.jsonl")
    ser.save_spectrum(records, spectrum_path, meta=_meta(spec) | {"size": size})
    paths["spectrum"] = spectrum_path

    cols = _entropy_columns(qg, records)
    csv_path = _out(spec, "entropy.csv")
    ser.write_csv(csv_path, ser.ENTROPY_CSV_SCHEMA, cols, meta=_meta(spec))
    paths["entropy_csv"] = csv_path

    summary = {"size": size, "n_eigen": len(records),
               "mean_normalized_entropy": float(np.mean(cols["normalized_entropy"]))
               if records else None,
               "mean_variance": float(np.mean(cols["variance"])) if records else None,
               "bounds": _bound_parameters(qg),
               "spec": spec.resolved(), "spec_hash": spec.hash(),
               "code": ser.CODE_VERSION}
    if with_entropy_csv:
        json_path = _out(spec, "entropy.json")
        ser.write_json(json_path, ser.ENTROPY_CSV_SCHEMA, summary)
        paths["summary"] = json_path
    return ExperimentResult(spec.hash(), paths, summary)


def _fit_entropy_model(b_values, mean_sn):
    """Least-squares fit of mean_S_N ~ 1 - alpha B^beta / ln B."""
    from scipy.optimize import least_squares

    b = np.asarray(b_values, dtype=float)
    y = np.asarray(mean_sn, dtype=float)

    def resid(params):
        alpha, beta = params
        return 1.0 - alpha * np.power(b, beta) / np.log(b) - y

    x0 = np.array([max((1.0 - y[0]) * math.log(b[0]), 1e-3), 0.0])
    fit = least_squares(resid, x0, max_nfev=10_000)
    return float(fit.x[0]), float(fit.x[1])


def _run_mean_entropy(spec: ExperimentSpec):
    def worker(size, seq):
        qg, records = _spectrum_cell(spec, size, seq)
        cols = _entropy_columns(qg, records)
        return {
            "size": size,
            "bond_count": qg.bond_count,
            "n_eigen": len(records),
            "mean_normalized_entropy": float(np.mean(cols["normalized_entropy"])),
            "mean_variance": float(np.mean(cols["variance"])),
        }

    rows = _run_cells(spec, worker)
    for row in rows:
        row["variance_bound"] = 1.0 - row["mean_variance"] / math.log(row["bond_count"])

    summary = {"rows": rows, "spec": spec.resolved(), "spec_hash": spec.hash(),
               "code": ser.CODE_VERSION}
    if len(rows) >= 2:
        alpha, beta = _fit_entropy_model([r["bond_count"] for r in rows],
                                         [r["mean_normalized_entropy"] for r in rows])
        summary["fit_alpha"] = alpha
        summary["fit_beta"] = beta
    if spec.family == "star" and spec.boundary == "neumann":
        summary["c_neumann"] = derived_constants.C_NEUMANN

    paths = {}
    csv_path = _out(spec, "mean-entropy.csv")
    ser.write_csv(csv_path, ser.MEAN_ENTROPY_SCHEMA, {
        "size": [r["size"] for r in rows],
        "bond_count": [r["bond_count"] for r in rows],
        "n_eigen": [r["n_eigen"] for r in rows],
        "mean_normalized_entropy": [r["mean_normalized_entropy"] for r in rows],
        "mean_variance": [r["mean_variance"] for r in rows],
        "variance_bound": [r["variance_bound"] for r in rows],
    }, meta=_meta(spec))
    paths["mean_entropy_csv"] = csv_path
    json_path = _out(spec, "mean-entropy.json")
    ser.write_json(json_path, ser.MEAN_ENTROPY_SCHEMA, summary)
    paths["summary"] = json_path
    return ExperimentResult(spec.hash(), paths, summary)


def _density_curve(y_samples):
    """Plot samples of the limit density over the bulk of the data."""
    y_hi = float(np.quantile(y_samples, 0.995)) * 1.2
    grid = np.linspace(1e-4, max(y_hi, 0.5), 160)
    dens = np.array([limit_density_P(float(y)) for y in grid])
    return grid, dens


def _ks_distance(y_samples):
    """Kolmogorov-Smirnov distance to the limit density; the model CDF
    needs a dense log grid because the density peaks sharply near 0."""
    grid = np.geomspace(1e-4, max(float(np.max(y_samples)) * 2, 1e2), 1500)
    dens = np.array([limit_density_P(float(y)) for y in grid])
    cdf = np.concatenate(([0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(grid))))
    samples = np.sort(y_samples)
    emp = np.arange(1, len(samples) + 1) / len(samples)
    model = np.interp(samples, grid, cdf)
    return float(np.abs(emp - model).max())


def _run_star_average(spec: ExperimentSpec):
    if spec.family != "star" or spec.boundary != "neumann":
        raise ValueError("star-average requires the Neumann star family")

    def worker(size, seq):
        lengths = _sample_cell_lengths(spec, size, seq)
        result, records = average_entropy_experiment(lengths, spec.n_eigen,
                                                     variant=spec.variant)
        return lengths, result, records

    cells = _run_cells(spec, worker)
    paths = {}
    rows = []
    for size, (lengths, result, records) in zip(spec.sizes, cells):
        sec2_norm = np.array([(1.0 / np.cos(r.k * lengths.lengths) ** 2).sum() / size ** 2
                              for r in records])
        csv_path = _out(spec, f"star-{size}.csv")
        ser.write_csv(csv_path, ser.STAR_CSV_SCHEMA, {
            "n": [r.index for r in records],
            "k_n": [r.k for r in records],
            "S_A": [r.S_A for r in records],
            "S_a": [r.S_a for r in records],
            "S_N_A": [r.S_N_A for r in records],
            "S_N_a": [r.S_N_a for r in records],
            "L_A": [r.L_A for r in records],
            "y_sec2": sec2_norm,
        }, meta=_meta(spec) | {"size": size})
        paths[f"star_csv_{size}"] = csv_path

        grid, dens = _density_curve(sec2_norm)
        rows.append({
            "edge_count": result.edge_count,
            "n_eigen": result.n_eigen,
            "weighted_average_A": result.weighted_average_A,
            "weighted_average_a": result.weighted_average_a,
            "prediction_A": result.prediction_A,
            "prediction_a": result.prediction_a,
            "c_constant": result.c_constant,
            "ks_distance": _ks_distance(sec2_norm),
            "density_curve": {"y": grid.tolist(), "p": dens.tolist()},
        })

    summary = {"rows": rows, "spec": spec.resolved(), "spec_hash": spec.hash(),
               "code": ser.CODE_VERSION}
    json_path = _out(spec, "star-average.json")
    ser.write_json(json_path, ser.STAR_AVERAGE_SCHEMA, summary)
    paths["summary"] = json_path
    return ExperimentResult(spec.hash(), paths, summary)


def _run_bounds(spec: ExperimentSpec):
    size = spec.sizes[0]
    qg, records = _spectrum_cell(spec, size, _cell_seeds(spec)[0])
    if not records:
        raise NumericalError("no eigenvalues found in the requested window")
    table = {}
    for rec in records:
        report = verify_bounds(rec, qg)
        for chk in report.bounds:
            if chk.satisfied is None:
                table.setdefault(chk.name, {"skipped": chk.detail})
                continue
            entry = table.setdefault(chk.name, {"min_margin": math.inf,
                                                "threshold": chk.threshold,
                                                "violations": 0})
            entry["min_margin"] = min(entry["min_margin"], chk.margin)
            entry["threshold"] = chk.threshold
            entry["violations"] += 0 if chk.satisfied else 1

    bounds_rows = []
    violations = []
    for name, entry in sorted(table.items()):
        if "skipped" in entry:
            bounds_rows.append({"bound_name": name, "skipped": entry["skipped"]})
            continue
        row = {"bound_name": name,
               "threshold": entry["threshold"],
               "min_margin_over_spectrum": entry["min_margin"],
               "satisfied": entry["violations"] == 0}
        bounds_rows.append(row)
        if entry["violations"]:
            violations.append(name)

    summary = {"size": size, "n_eigen": len(records), "bounds": bounds_rows,
               "spec": spec.resolved(), "spec_hash": spec.hash(),
               "code": ser.CODE_VERSION}
    paths = {}
    json_path = _out(spec, "bounds.json")
    ser.write_json(json_path, ser.BOUNDS_SCHEMA, summary)
    paths["summary"] = json_path
    return ExperimentResult(spec.hash(), paths, summary, violations=tuple(violations))


def _run_localization(spec: ExperimentSpec):
    if spec.family != "star" or spec.boundary != "neumann":
        raise ValueError("localization requires the Neumann star family")
    size = spec.sizes[0]
    lengths = _sample_cell_lengths(spec, size, _cell_seeds(spec)[0])
    check = localization_heuristic_check(lengths)

    paths = {}
    csv_path = _out(spec, "localization.csv")
    ser.write_csv(csv_path, ser.LOCALIZATION_SCHEMA, {
        "edge": np.arange(size),
        "length": lengths.lengths,
        "mass": check.masses,
    }, meta=_meta(spec))
    paths["masses_csv"] = csv_path

    summary = {
        "size": size,
        "k1": check.k1,
        "prediction": check.prediction,
        "relative_gap": abs(check.k1 - check.prediction) / check.k1,
        "mass_on_longest_edge": check.mass_on_longest_edge,
        "longest_edge": check.longest_edge,
        "l_max": float(lengths.lengths.max()),
        "spec": spec.resolved(),
        "spec_hash": spec.hash(),
        "code": ser.CODE_VERSION,
    }
    json_path = _out(spec, "localization.json")
    ser.write_json(json_path, ser.LOCALIZATION_SCHEMA, summary)
    paths["summary"] = json_path
    return ExperimentResult(spec.hash(), paths, summary)


def run(spec: ExperimentSpec) -> ExperimentResult:
    """Execute an experiment; see the module docstring for determinism and
    output conventions."""
    if spec.kind == "spectrum":
        return _run_spectrum(spec, with_entropy_csv=False)
    if spec.kind == "entropy-histogram":
        return _run_spectrum(spec, with_entropy_csv=True)
    if spec.kind == "mean-entropy-vs-size":
        return _run_mean_entropy(spec)
    if spec.kind == "star-average":
        return _run_star_average(spec)
    if spec.kind == "bounds-report":
        return _run_bounds(spec)
    if spec.kind == "localization":
        return _run_localization(spec)
    raise ValueError(f"unknown experiment kind {spec.kind!r}")
