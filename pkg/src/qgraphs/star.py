"""Analytic pipeline for star graphs.

For a star with Neumann conditions everywhere the eigenfunction on edge
e is A_e cos(k (x - L_e)) with x measured from the center, so the whole
spectral problem reduces to scalars: eigenvalues are the roots of
s(k) = sum_e tan(k L_e), which is strictly increasing between the poles
of the tangent terms, and the amplitudes at a root are A_e proportional
to sec(k L_e).  This is orders of magnitude faster than the general
bond-matrix solver and is cross-validated against it in the tests.

The module also carries the large-size weighted average of eigenfunction
entropies: the quadrature for the governing constant, the limit density
of the normalized sec^2 sums, and the low-k localization heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special
from scipy.optimize import brentq

from . import derived_constants
from .errors import DegenerateCaseError, NumericalError
from .graphs import EdgeLengths, star_graph
from .quantum import QuantumGraph, find_eigenvalues, make_quantum_graph
from .scattering import VertexSMatrix

POLE_MERGE_WIDTH = 1e-12
SEC_POLE_TOL = 1e-8


def _as_lengths(lengths) -> np.ndarray:
    if isinstance(lengths, EdgeLengths):
        return lengths.lengths
    lens = np.asarray(lengths, dtype=float)
    if np.any(lens <= 0):
        raise ValueError("lengths must be positive")
    return lens


# ---------------------------------------------------------------------------
# secular roots


def _tan_sum(k, lens):
    return np.tan(np.multiply.outer(k, lens)).sum(axis=-1)


def _pole_grid(lens, k_max):
    poles = []
    for L in lens:
        m_max = int(math.floor(k_max * L / math.pi + 0.5)) + 1
        poles.append((np.arange(m_max) + 0.5) * math.pi / L)
    poles = np.concatenate(poles)
    return np.sort(poles[poles <= k_max * (1 + 1e-12)])


def star_secular_roots_neumann(lengths, k_min: float, k_max: float,
                               tol: float = 1e-12) -> np.ndarray:
    """Roots of sum_e tan(k L_e) on [k_min, k_max], one per pole interval.

    Between consecutive tangent poles the function increases strictly
    from -inf to +inf, so bisection per interval finds every root.
    Pole intervals narrower than 1e-12 (rationally dependent lengths)
    are handed to the general bond-matrix solver, which also recovers
    the degenerate eigenfunctions supported on the coinciding edges.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not 0 <= k_min < k_max:
        raise ValueError("need 0 <= k_min < k_max")
    lens = _as_lengths(lengths)

    poles = _pole_grid(lens, k_max)
    # coinciding poles (rationally dependent lengths) host degenerate
    # eigenfunctions that the tangent sum cannot see
    degenerate = []
    if len(poles) > 1:
        tight = np.flatnonzero(np.diff(poles) <= POLE_MERGE_WIDTH)
        for i in tight:
            p = 0.5 * (poles[i] + poles[i + 1])
            if not degenerate or p - degenerate[-1] > POLE_MERGE_WIDTH:
                degenerate.append(p)

    cuts = np.concatenate(([max(k_min, 0.0)], poles[poles > k_min], [k_max]))
    cuts = np.unique(cuts)

    roots = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= POLE_MERGE_WIDTH:
            continue
        pad = max((b - a) * 1e-9, 1e-15)
        lo, hi = a + pad, b - pad
        fl, fh = _tan_sum(lo, lens), _tan_sum(hi, lens)
        if not (np.isfinite(fl) and np.isfinite(fh)) or np.sign(fl) == np.sign(fh):
            continue
        roots.append(brentq(lambda k: _tan_sum(k, lens), lo, hi, xtol=tol))

    if degenerate:
        qg = neumann_star(lens)
        pad = max(100 * tol, 1e-9)
        for p in degenerate:
            if not k_min - pad <= p <= k_max + pad:
                continue
            for rec in find_eigenvalues(qg, max(p - pad, 1e-12), p + pad,
                                        tol=max(tol, 1e-12)):
                roots.extend([rec.k] * rec.multiplicity_hint)

    roots = np.array(sorted(roots))
    return roots[(roots > max(k_min, tol)) & (roots <= k_max)]


def star_amplitudes(k_n: float, lengths) -> np.ndarray:
    """Normalized edge amplitudes at an eigenvalue: A_e ~ sec(k_n L_e).

    Raises DegenerateCaseError near a tangent pole, where the sec
    parameterization breaks down and the general solver must be used.
    """
    lens = _as_lengths(lengths)
    c = np.cos(k_n * lens)
    if np.any(np.abs(c) < SEC_POLE_TOL):
        raise DegenerateCaseError(
            f"cos(k L_e) below {SEC_POLE_TOL:g} at k={k_n}; amplitude formula is singular")
    a = 1.0 / c
    return a / np.linalg.norm(a)


def star_bond_vector(k_n: float, amplitudes: np.ndarray, lengths) -> np.ndarray:
    """Unit bond vector of the general solver induced by edge amplitudes.

    With the package bond ordering (center->leaf first), edge e maps to
    a[2e] = A_e exp(-i k L_e) and a[2e+1] = A_e, up to normalization.
    """
    lens = _as_lengths(lengths)
    amplitudes = np.asarray(amplitudes)
    a = np.empty(2 * len(lens), dtype=complex)
    a[0::2] = amplitudes * np.exp(-1j * k_n * lens)
    a[1::2] = amplitudes
    return a / np.linalg.norm(a)


def sigma_k_matrix(sigma0, k: float, lengths) -> np.ndarray:
    """Unitary |E| x |E| matrix exp(ikL) sigma0 exp(ikL); its fixed vectors
    at eigenvalues are the edge amplitude vectors."""
    lens = _as_lengths(lengths)
    m = sigma0.entries if isinstance(sigma0, VertexSMatrix) else np.asarray(sigma0, dtype=complex)
    if m.shape != (len(lens), len(lens)):
        raise ValueError("sigma0 dimension must equal the number of edges")
    phase = np.exp(1j * k * lens)
    return phase[:, None] * m * phase[None, :]


def neumann_star(lengths) -> QuantumGraph:
    lens = _as_lengths(lengths)
    return make_quantum_graph(star_graph(len(lens)), EdgeLengths(lens), "neumann")


def equitransmitting_star(lengths) -> QuantumGraph:
    lens = _as_lengths(lengths)
    return make_quantum_graph(star_graph(len(lens)), EdgeLengths(lens), "equitransmitting")


# ---------------------------------------------------------------------------
# spectrum records and averages


@dataclass(frozen=True)
class StarSpectrumRecord:
    """One Neumann-star eigenvalue with its edge amplitudes and entropies
    (S_A, S_a in nats for the edge and bond vectors)."""

    k: float
    A: np.ndarray
    S_A: float
    S_a: float
    L_A: float
    index: int

    @property
    def edge_count(self) -> int:
        return len(self.A)

    @property
    def S_N_A(self) -> float:
        return self.S_A / math.log(self.edge_count)

    @property
    def S_N_a(self) -> float:
        return self.S_a / math.log(2 * self.edge_count)


def _records_from_roots(roots, lens) -> list:
    """Vectorized per-root amplitudes, entropies and weighted lengths."""
    sec2 = 1.0 / np.cos(np.multiply.outer(roots, lens)) ** 2
    p = sec2 / sec2.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(p > 0, p * np.log(p), 0.0)
    s_a_edge = -plogp.sum(axis=1)
    # bond distribution halves every weight and doubles the support
    s_a_bond = s_a_edge + math.log(2)
    l_a = (lens[None, :] * p).sum(axis=1) / lens.mean()
    records = []
    for i, k in enumerate(roots):
        amp = np.sign(1.0 / np.cos(k * lens)) * np.sqrt(p[i])
        records.append(StarSpectrumRecord(k=float(k), A=amp, S_A=float(s_a_edge[i]),
                                          S_a=float(s_a_bond[i]), L_A=float(l_a[i]),
                                          index=i + 1))
    return records


def star_spectrum_records(lengths, k_min: float, k_max: float,
                          tol: float = 1e-12, max_records: int = None) -> list:
    """Neumann-star records on a window; roots too close to a tangent pole
    for the sec parameterization are recovered through the general
    solver's bond eigenvector (A_e is proportional to the leaf-to-center
    component)."""
    lens = _as_lengths(lengths)
    roots = star_secular_roots_neumann(lens, k_min, k_max, tol)
    if max_records is not None:
        roots = roots[:max_records]
    safe = np.all(np.abs(np.cos(np.multiply.outer(roots, lens))) >= SEC_POLE_TOL, axis=1)
    records = _records_from_roots(roots[safe], lens)
    if not np.all(safe):
        qg = neumann_star(lens)
        for k in roots[~safe]:
            rec = find_eigenvalues(qg, k - 1e-6, k + 1e-6, tol=tol)[0]
            amp = 2.0 * rec.a[1::2]
            amp = np.real(amp * np.exp(-1j * np.angle(amp[np.argmax(np.abs(amp))])))
            amp /= np.linalg.norm(amp)
            p = amp ** 2
            s_edge = float(-(p[p > 0] * np.log(p[p > 0])).sum())
            records.append(StarSpectrumRecord(
                k=float(rec.k), A=amp, S_A=s_edge, S_a=s_edge + math.log(2),
                L_A=float((lens * p).sum() / lens.mean()), index=0))
        records.sort(key=lambda r: r.k)
        records = [StarSpectrumRecord(r.k, r.A, r.S_A, r.S_a, r.L_A, i + 1)
                   for i, r in enumerate(records)]
    return records


@dataclass(frozen=True)
class AverageEntropyResult:
    """Weighted average entropies over a star spectrum against the
    closed-form large-size predictions."""

    edge_count: int
    n_eigen: int
    weighted_average_A: float
    weighted_average_a: float
    prediction_A: float
    prediction_a: float
    c_constant: float


def average_entropy_experiment(lengths, n_eigen: int,
                               variant: str = derived_constants.M_PROFILE_DEFAULT,
                               k_min: float = 1e-9) -> tuple:
    """Weighted averages (1/N) sum S_N/L over the first n_eigen records,
    for both the edge-amplitude and the bond-vector entropies, with the
    asymptotic predictions C/ln|E| and (C + ln 2)/(ln|E| + ln 2).

    Returns (AverageEntropyResult, records).
    """
    if n_eigen < 1000:
        raise ValueError("averages need at least 1000 eigenvalues")
    lens = _as_lengths(lengths)
    e_count = len(lens)
    # size the window by the mean spacing pi/L_tot, with slack, and extend once
    k_max = k_min + 1.15 * n_eigen * math.pi / lens.sum()
    records = star_spectrum_records(lens, k_min, k_max, max_records=n_eigen)
    if len(records) < n_eigen:
        k_max += 0.5 * n_eigen * math.pi / lens.sum()
        records = star_spectrum_records(lens, k_min, k_max, max_records=n_eigen)
    if len(records) < n_eigen:
        raise NumericalError(f"found only {len(records)} of {n_eigen} eigenvalues")
    records = records[:n_eigen]

    ln_e = math.log(e_count)
    avg_A = float(np.mean([r.S_N_A / r.L_A for r in records]))
    avg_a = float(np.mean([r.S_N_a / r.L_A for r in records]))
    c = c_neumann_constant(variant)["c_neumann"]
    result = AverageEntropyResult(
        edge_count=e_count,
        n_eigen=len(records),
        weighted_average_A=avg_A,
        weighted_average_a=avg_a,
        prediction_A=c / ln_e,
        prediction_a=(c + math.log(2)) / (ln_e + math.log(2)),
        c_constant=c,
    )
    return result, records


# ---------------------------------------------------------------------------
# the governing constant and the limit density


def m_profile(xi, variant: str = derived_constants.M_PROFILE_DEFAULT):
    """Amplitude profile entering the average-entropy integrals.

    Two prefactor conventions circulate; "plain" is the one whose
    integral matches the frozen constant (see derived_constants).
    """
    xi = np.asarray(xi, dtype=float)
    tail = xi * special.erf(xi / 2)
    if variant == "plain":
        return np.exp(-(xi ** 2) / 4) + tail
    if variant == "two_over_sqrt_pi":
        return (2 / math.sqrt(math.pi)) * np.exp(-(xi ** 2) / 4) + tail
    raise ValueError(f"unknown variant {variant!r}")


def c_neumann_constant(variant: str = derived_constants.M_PROFILE_DEFAULT,
                       quadrature_tol: float = 1e-10) -> dict:
    """Gaussian-weighted integral of ln m^2 and the entropy constant
    gamma + integral, by adaptive quadrature."""
    if quadrature_tol > 1e-8:
        raise ValueError("quadrature_tol must be <= 1e-8")

    def integrand(xi):
        return math.exp(-(xi ** 2) / 4) * math.log(float(m_profile(xi, variant)) ** 2)

    val, err = integrate.quad(integrand, -np.inf, np.inf,
                              epsabs=quadrature_tol, epsrel=quadrature_tol, limit=400)
    if err > max(quadrature_tol * 100, 1e-8):
        raise NumericalError(f"quadrature error estimate {err:g} too large")
    integral = val / math.sqrt(4 * math.pi)
    return {"integral_value": integral, "c_neumann": np.euler_gamma + integral}


def limit_density_P(y, variant: str = derived_constants.P_DENSITY_PROFILE_DEFAULT,
                    quadrature_tol: float = 1e-10) -> float:
    """Large-size limit density of (1/|E|^2) sum_e sec^2(k_n L_e); zero for
    y <= 0.  The default profile is the one matching simulation (see
    derived_constants)."""
    if y <= 0:
        return 0.0

    def integrand(xi):
        m = float(m_profile(xi, variant))
        return math.exp(-(xi ** 2) / 4 - m * m / (4 * y)) * m

    val, _ = integrate.quad(integrand, -np.inf, np.inf,
                            epsabs=quadrature_tol, epsrel=quadrature_tol, limit=400)
    return val / (4 * math.pi * y ** 1.5)


# ---------------------------------------------------------------------------
# low-k localization heuristic


@dataclass(frozen=True)
class LocalizationCheck:
    k1: float
    prediction: float
    mass_on_longest_edge: float
    masses: np.ndarray
    longest_edge: int


def localization_heuristic_check(lengths) -> LocalizationCheck:
    """Smallest positive eigenvalue of a Neumann star against the
    pi/(2 L_max) heuristic, with the ground state's per-edge masses."""
    lens = _as_lengths(lengths)
    l_max = float(lens.max())
    prediction = math.pi / (2 * l_max)
    # the first root sits just past the first tangent pole
    k_hi = prediction
    roots = np.array([])
    while roots.size == 0:
        k_hi *= 1.6
        roots = star_secular_roots_neumann(lens, 1e-9, k_hi)
    k1 = float(roots[0])
    try:
        amp = star_amplitudes(k1, lens)
    except DegenerateCaseError:
        rec = find_eigenvalues(neumann_star(lens), k1 - 1e-6, k1 + 1e-6)[0]
        amp = np.abs(2.0 * rec.a[1::2])
        amp /= np.linalg.norm(amp)
    masses = np.abs(amp) ** 2
    j = int(np.argmax(lens))
    return LocalizationCheck(k1=k1, prediction=prediction,
                             mass_on_longest_edge=float(masses[j]),
                             masses=masses, longest_edge=j)
