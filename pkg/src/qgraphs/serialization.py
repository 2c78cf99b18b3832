"""Persistence of graphs, spectra and experiment outputs.

All artifacts carry version "1" and a schema tag; loaders refuse
anything else.  CSV files start with a '#' comment block (schema, spec
hash, seed, code version, and an isolated timestamp line) followed by a
header row; numbers are written with 15 significant digits so that
reruns with the same spec and seed are byte-identical apart from the
timestamp line.
"""

from __future__ import annotations

import hashlib
import json
from datetime import datetime, timezone

import numpy as np

from .errors import SchemaError
from .graphs import EdgeLengths, graph_from_edges
from .quantum import EigenpairRecord, QuantumGraph
from .scattering import VertexSMatrix

VERSION = "1"
CODE_VERSION = "qgraphs 0.1.0"

GRAPH_SCHEMA = "qgraphs/quantum-graph@1"
SPECTRUM_SCHEMA = "qgraphs/spectrum@1"
ENTROPY_CSV_SCHEMA = "qgraphs/entropy-scatter@1"
STAR_CSV_SCHEMA = "qgraphs/star-spectrum@1"
MEAN_ENTROPY_SCHEMA = "qgraphs/mean-entropy-vs-size@1"
STAR_AVERAGE_SCHEMA = "qgraphs/star-average@1"
BOUNDS_SCHEMA = "qgraphs/bounds@1"
LOCALIZATION_SCHEMA = "qgraphs/localization@1"


def _complex_pairs(vec) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec).ravel()]


def _pairs_to_complex(pairs, shape=None) -> np.ndarray:
    arr = np.array([complex(re, im) for re, im in pairs])
    return arr.reshape(shape) if shape is not None else arr


def spec_hash(payload: dict) -> str:
    """Short stable hash of a resolved experiment spec."""
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _check_envelope(doc: dict, schema: str, path):
    if doc.get("version") != VERSION:
        raise SchemaError(f"{path}: expected version {VERSION!r}, got {doc.get('version')!r}")
    if doc.get("schema") != schema:
        raise SchemaError(f"{path}: expected schema {schema!r}, got {doc.get('schema')!r}")


# ---------------------------------------------------------------------------
# quantum graph artifacts


def quantum_graph_to_dict(qg: QuantumGraph) -> dict:
    sms = []
    for sm in qg.smatrices:
        sms.append({
            "kind": sm.kind,
            "degree": sm.degree,
            "entries": _complex_pairs(sm.entries),
            "p": sm.prime,
        })
    return {
        "version": VERSION,
        "schema": GRAPH_SCHEMA,
        "vertex_count": qg.graph.vertex_count,
        "edges": [[int(i), int(j)] for i, j in qg.graph.edges],
        "lengths": [float(x) for x in qg.lengths.lengths],
        "smatrices": sms,
    }


def quantum_graph_from_dict(doc: dict, path="<dict>") -> QuantumGraph:
    _check_envelope(doc, GRAPH_SCHEMA, path)
    g = graph_from_edges(doc["vertex_count"], [tuple(e) for e in doc["edges"]])
    sms = []
    for entry in doc["smatrices"]:
        d = entry["degree"]
        m = _pairs_to_complex(entry["entries"], (d, d))
        sms.append(VertexSMatrix(d, m, entry["kind"], prime=entry.get("p")))
    return QuantumGraph(g, EdgeLengths(np.array(doc["lengths"])), tuple(sms))


def save_quantum_graph(qg: QuantumGraph, path) -> None:
    with open(path, "w") as fh:
        json.dump(quantum_graph_to_dict(qg), fh, indent=1)
        fh.write("\n")


def load_quantum_graph(path) -> QuantumGraph:
    with open(path) as fh:
        return quantum_graph_from_dict(json.load(fh), path)


# ---------------------------------------------------------------------------
# spectra


def save_spectrum(records, path, meta: dict = None) -> None:
    header = {"version": VERSION, "schema": SPECTRUM_SCHEMA}
    header.update(meta or {})
    with open(path, "w") as fh:
        fh.write(json.dumps(header) + "\n")
        for rec in records:
            fh.write(json.dumps({
                "index": rec.index,
                "k": rec.k,
                "residual": rec.residual,
                "multiplicity": rec.multiplicity_hint,
                "a": _complex_pairs(rec.a),
            }) + "\n")


def load_spectrum(path):
    """(records, header_meta) from a JSONL spectrum file."""
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty spectrum file")
    header = json.loads(lines[0])
    _check_envelope(header, SPECTRUM_SCHEMA, path)
    records = []
    for ln in lines[1:]:
        doc = json.loads(ln)
        records.append(EigenpairRecord(
            k=doc["k"], a=_pairs_to_complex(doc["a"]),
            residual=doc["residual"], multiplicity_hint=doc["multiplicity"],
            index=doc["index"],
        ))
    return records, header


# ---------------------------------------------------------------------------
# delimited output


def format_sig(x) -> str:
    return f"{float(x):.15g}"


def write_csv(path, schema: str, columns: dict, meta: dict = None) -> None:
    """CSV with a '#' metadata block; columns is an ordered name -> array
    mapping, all of equal length."""
    names = list(columns)
    arrays = [np.asarray(columns[n]) for n in names]
    n_rows = len(arrays[0]) if arrays else 0
    lines = [f"# schema: {schema}", f"# version: {VERSION}", f"# code: {CODE_VERSION}"]
    for key, val in (meta or {}).items():
        lines.append(f"# {key}: {val}")
    lines.append(f"# generated: {datetime.now(timezone.utc).isoformat()}")
    lines.append(",".join(names))
    for i in range(n_rows):
        lines.append(",".join(format_sig(col[i]) for col in arrays))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_csv(path, schema: str = None):
    """(columns dict of float arrays, meta dict) from a package CSV."""
    meta = {}
    rows = []
    names = None
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if ":" in body:
                    key, val = body.split(":", 1)
                    meta[key.strip()] = val.strip()
                continue
            if names is None:
                names = line.split(",")
                continue
            rows.append([float(x) for x in line.split(",")])
    if names is None:
        raise SchemaError(f"{path}: no header row")
    if schema is not None and meta.get("schema") != schema:
        raise SchemaError(f"{path}: expected schema {schema!r}, got {meta.get('schema')!r}")
    data = np.array(rows) if rows else np.zeros((0, len(names)))
    return {n: data[:, i] for i, n in enumerate(names)}, meta


def write_json(path, schema: str, payload: dict) -> None:
    doc = {"version": VERSION, "schema": schema}
    doc.update(payload)
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_json(path, schema: str) -> dict:
    with open(path) as fh:
        doc = json.load(fh)
    _check_envelope(doc, schema, path)
    return doc
