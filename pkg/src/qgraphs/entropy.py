"""Entropy, variance and weighted-length diagnostics for bond vectors,
plus the uncertainty-principle and theorem lower bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import girth as graph_girth
from .quantum import QuantumGraph, EigenpairRecord
from .scattering import EQUI_TRANSMITTING

NORM_TOL = 1e-10
VARIANCE_BOUND_SLACK = 1e-12


def _probabilities(a) -> np.ndarray:
    a = np.asarray(a)
    p = np.abs(a) ** 2
    total = p.sum()
    if total == 0:
        raise ValueError("entropy of the zero vector is undefined")
    return p / total


def entropy(a) -> float:
    """Shannon entropy (nats) of the squared-modulus distribution of a."""
    p = _probabilities(a)
    nz = p[p > 0]
    return float(-(nz * np.log(nz)).sum())


def normalized_entropy(a, B: int = None) -> float:
    """entropy(a) / ln B, in [0, 1]."""
    if B is None:
        B = len(a)
    if B < 2:
        raise ValueError("normalization needs B >= 2")
    return entropy(a) / math.log(B)


def variance(a) -> float:
    """V(a) = (1/B) sum_b (B |a_b|^2 - 1)^2 for a unit vector a.

    Algebraically equal to B sum |a_b|^4 - 1, the inverse-participation
    -ratio form.
    """
    a = np.asarray(a)
    nrm = np.linalg.norm(a)
    if abs(nrm - 1.0) > NORM_TOL:
        raise ValueError(f"variance requires a unit vector, got norm {nrm}")
    p = np.abs(a) ** 2
    B = len(a)
    return float(np.mean((B * p - 1.0) ** 2))


def weighted_length(a, lengths) -> float:
    """L(a) = (1/mean L) sum_b L_b |a_b|^2 with per-component lengths."""
    a = np.asarray(a)
    lengths = np.asarray(lengths, dtype=float)
    if lengths.shape != a.shape:
        raise ValueError("need one length per component")
    p = np.abs(a) ** 2
    return float((lengths * p).sum() / (lengths.mean() * p.sum()))


@dataclass(frozen=True)
class UncertaintyBound:
    """Entropy lower bound -1/2 ln max |(U^t)_{bb'}|^2 with its argmax."""

    value: float
    max_prob: float
    row: int
    col: int


def maassen_uffink_bound(u, t: int = 1) -> UncertaintyBound:
    """Single-term eigenvector bound from the entropic uncertainty
    principle applied to U^t."""
    if t < 1:
        raise ValueError("t must be >= 1")
    m = u.entries if hasattr(u, "entries") else np.asarray(u)
    ut = np.linalg.matrix_power(m, t)
    prob = np.abs(ut) ** 2
    flat = int(np.argmax(prob))
    row, col = np.unravel_index(flat, prob.shape)
    pmax = float(prob[row, col])
    return UncertaintyBound(value=-0.5 * math.log(pmax), max_prob=pmax,
                            row=int(row), col=int(col))


# ---------------------------------------------------------------------------
# theorem bounds as per-eigenvector checks


@dataclass(frozen=True)
class BoundCheck:
    name: str
    threshold: float = None
    satisfied: bool = None
    margin: float = None
    detail: str = ""


@dataclass(frozen=True)
class EntropyReport:
    S: float
    S_N: float
    V: float
    L_weighted: float
    bounds: tuple


def _is_star(qg: QuantumGraph) -> bool:
    degs = qg.graph.degrees
    if qg.graph.vertex_count < 2:
        return False
    return degs[0] == qg.graph.vertex_count - 1 and np.all(degs[1:] == 1)


def _all_equitransmitting(qg: QuantumGraph, skip_leaves: bool = False) -> bool:
    for sm in qg.smatrices:
        if skip_leaves and sm.degree == 1:
            continue
        if sm.kind != EQUI_TRANSMITTING:
            return False
    return True


def girth_bound_exponent(g) -> int:
    """Power t used with the uncertainty principle for the girth bound:
    the smallest integer >= g/2 (always < g/2 + 1)."""
    return math.ceil(g / 2)


def verify_bounds(record: EigenpairRecord, qg: QuantumGraph) -> EntropyReport:
    """Evaluate every applicable entropy lower bound for one eigenvector.

    The variance bound applies always; the girth bound to regular
    equi-transmitting graphs of finite girth; the star bound to
    equi-transmitting star graphs.  Inapplicable bounds are reported as
    skipped with a reason.
    """
    a = record.a
    B = len(a)
    ln_b = math.log(B)
    s = entropy(a)
    s_n = s / ln_b
    v = variance(a)
    l_w = weighted_length(a, qg.bond_length_vector)

    checks = []

    thr = 1.0 - v / ln_b
    margin = s_n - thr
    checks.append(BoundCheck("variance", threshold=thr,
                             satisfied=bool(margin >= -VARIANCE_BOUND_SLACK),
                             margin=margin))

    degs = qg.graph.degrees
    regular = bool(np.all(degs == degs[0])) and qg.graph.vertex_count > 1
    if regular and _all_equitransmitting(qg):
        g = graph_girth(qg.graph)
        if math.isinf(g):
            checks.append(BoundCheck("girth", detail="skipped: graph has no cycle"))
        else:
            d = int(degs[0]) - 1
            thr = g * math.log(d) / (4.0 * ln_b)
            margin = s_n - thr
            checks.append(BoundCheck("girth", threshold=thr,
                                     satisfied=bool(margin >= 0), margin=margin,
                                     detail=f"girth={g}, t={girth_bound_exponent(g)}"))
    else:
        checks.append(BoundCheck(
            "girth", detail="skipped: requires a regular equi-transmitting graph"))

    if _is_star(qg) and qg.smatrices[0].kind == EQUI_TRANSMITTING:
        thr = 0.5 * math.log(B - 2) / ln_b
        margin = s_n - thr
        checks.append(BoundCheck("et-star", threshold=thr,
                                 satisfied=bool(margin >= 0), margin=margin))
    else:
        checks.append(BoundCheck(
            "et-star", detail="skipped: requires an equi-transmitting star"))

    return EntropyReport(S=s, S_N=s_n, V=v, L_weighted=l_w, bounds=tuple(checks))


def quantum_ergodicity_functional(records, d_diag, lengths) -> float:
    """Finite-N spectral average of |<a, D L a>|^2 / <a, L a> for a
    diagonal observable D with length-weighted mean zero."""
    d_diag = np.asarray(d_diag, dtype=float)
    lengths = np.asarray(lengths, dtype=float)
    d_bar = float((lengths * d_diag).sum() / lengths.sum())
    if abs(d_bar) > 1e-12:
        raise ValueError(f"observable must have zero weighted mean, got {d_bar:g}")
    if len(records) < 100:
        raise ValueError("need at least 100 eigenpair records")
    total = 0.0
    for rec in records:
        p = np.abs(rec.a) ** 2
        num = (d_diag * lengths * p).sum() ** 2
        den = (lengths * p).sum()
        total += num / den
    return float(total / len(records))
