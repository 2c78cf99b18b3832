"""Matplotlib rendering of the experiment outputs.

Each renderer reads the documented CSV/JSON artifacts, overlays the
bound curves recomputed from the serialized parameters and writes a
PNG next to the delimited output.  Rendering never recomputes physics
beyond the plotted transforms.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import serialization as ser
from .errors import SchemaError

DPI = 150


def _require(columns: dict, names, path):
    for name in names:
        if name not in columns:
            raise SchemaError(f"{path}: missing column {name!r}")


def render_entropy_scatter(csv_path, out_path, summary_json=None) -> str:
    """Normalized entropy of each eigenfunction over the spectral window,
    with the applicable constant lower bounds."""
    cols, _ = ser.read_csv(csv_path, schema=ser.ENTROPY_CSV_SCHEMA)
    _require(cols, ("k_n", "normalized_entropy"), csv_path)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(cols["k_n"], cols["normalized_entropy"], ".", ms=3, color="tab:blue")
    if summary_json:
        doc = ser.read_json(summary_json, ser.ENTROPY_CSV_SCHEMA)
        bounds = doc.get("bounds", {})
        drawn = 0
        for name, color in (("girth_bound", "tab:green"), ("et_star_bound", "tab:red")):
            if name in bounds:
                ax.axhline(bounds[name], color=color, lw=1.2,
                           label=name.replace("_", " "))
                drawn += 1
        if drawn:
            ax.legend(loc="lower right", fontsize=8)
    ax.set_xlabel("k")
    ax.set_ylabel("normalized entropy")
    ax.set_ylim(0, 1.02)
    fig.tight_layout()
    fig.savefig(out_path, dpi=DPI)
    plt.close(fig)
    return out_path


def render_mean_entropy_vs_size(json_path, out_path) -> str:
    """Mean normalized entropy against bond count with the variance-based
    lower bound, the fitted model and the star prediction when present."""
    doc = ser.read_json(json_path, ser.MEAN_ENTROPY_SCHEMA)
    rows = doc["rows"]
    if not rows:
        raise SchemaError(f"{json_path}: no data rows")
    b = np.array([r["bond_count"] for r in rows], dtype=float)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(b, [r["mean_normalized_entropy"] for r in rows], "o-",
            color="tab:blue", label="mean entropy")
    ax.plot(b, [r["variance_bound"] for r in rows], "s--",
            color="tab:green", label="variance bound")
    if "fit_alpha" in doc:
        bb = np.linspace(b.min(), b.max(), 200)
        fit = 1.0 - doc["fit_alpha"] * bb ** doc["fit_beta"] / np.log(bb)
        ax.plot(bb, fit, color="tab:orange", lw=1.2,
                label=f"fit alpha={doc['fit_alpha']:.3g} beta={doc['fit_beta']:.3g}")
    if "c_neumann" in doc:
        bb = np.linspace(b.min(), b.max(), 200)
        pred = (doc["c_neumann"] + math.log(2)) / np.log(bb)
        ax.plot(bb, pred, color="tab:red", lw=1.2, label="star prediction")
    ax.set_xlabel("bond count B")
    ax.set_ylabel("mean normalized entropy")
    ax.set_xscale("log")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=DPI)
    plt.close(fig)
    return out_path


def render_localized_state(csv_path, out_path, summary_json=None) -> str:
    """Per-edge squared amplitude of the low-k localized state."""
    cols, _ = ser.read_csv(csv_path, schema=ser.LOCALIZATION_SCHEMA)
    _require(cols, ("edge", "mass"), csv_path)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(cols["edge"], cols["mass"], color="tab:blue", width=0.9)
    title = "ground-state mass per edge"
    if summary_json:
        doc = ser.read_json(summary_json, ser.LOCALIZATION_SCHEMA)
        title += f" (k1={doc['k1']:.4f}, prediction {doc['prediction']:.4f})"
    ax.set_title(title, fontsize=10)
    ax.set_xlabel("edge")
    ax.set_ylabel("|A_e|^2")
    fig.tight_layout()
    fig.savefig(out_path, dpi=DPI)
    plt.close(fig)
    return out_path


def render_sec2_histogram(csv_path, summary_json, out_path, size=None) -> str:
    """Histogram of the normalized sec^2 sums against the limit density."""
    cols, _ = ser.read_csv(csv_path, schema=ser.STAR_CSV_SCHEMA)
    _require(cols, ("y_sec2",), csv_path)
    doc = ser.read_json(summary_json, ser.STAR_AVERAGE_SCHEMA)
    rows = doc["rows"]
    row = rows[0]
    if size is not None:
        matches = [r for r in rows if r["edge_count"] == size]
        if not matches:
            raise SchemaError(f"{summary_json}: no row with edge_count {size}")
        row = matches[0]
    fig, ax = plt.subplots(figsize=(7, 4))
    y = cols["y_sec2"]
    ax.hist(y, bins=60, range=(0, np.quantile(y, 0.995)), density=True,
            color="tab:blue", alpha=0.6, label="spectrum")
    curve = row["density_curve"]
    ax.plot(curve["y"], curve["p"], color="tab:red", lw=1.4, label="limit density")
    ax.set_xlabel("normalized sec^2 sum")
    ax.set_ylabel("density")
    ax.legend(fontsize=8, title=f"KS distance {row['ks_distance']:.3f}")
    fig.tight_layout()
    fig.savefig(out_path, dpi=DPI)
    plt.close(fig)
    return out_path
