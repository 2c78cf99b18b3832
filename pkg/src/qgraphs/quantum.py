"""Quantum graphs: the unitary bond scattering matrix and its spectrum.

A quantum graph is a combinatorial graph with positive edge lengths and
a unitary scattering matrix at each vertex.  The bond matrix at
wavenumber k acts on bond amplitude vectors a by scattering at the
tail vertex of each outgoing bond with the phase accumulated on the
incoming bond:

    (U(k) a)[i,j] = sum over neighbors j' of i of
                    sigma_i[j, j'] * exp(i k L_{j'i}) * a[j',i]

Laplacian eigenvalues -k^2 of the metric graph correspond to the roots
of det(U(k) - I) = 0, i.e. to wavenumbers where U(k) has eigenvalue 1.

The solver exploits two facts.  Eigenphases theta_j(k) of U(k) move
counterclockwise with velocity d theta/dk = <a_j, L a_j> bounded by
[L_min, L_max], and the sum of all phases grows exactly linearly,
sum_j theta_j(k) = const + 2 L_tot k.  The number of roots in any
window (k1, k2] therefore equals

    ( sum of phases mod 2pi at k1 - same at k2 + 2 L_tot (k2-k1) ) / 2pi

exactly, with no tracking ambiguity.  Scanning with the velocity-bound
step localizes roots, a false-position iteration on the phase nearest
zero refines them, and shifted inverse iteration extracts the fixed
vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import NumericalError
from .graphs import BondIndex, EdgeLengths, Graph, UniformLengths
from .scattering import EQUI_TRANSMITTING, equitransmitting_smatrix, neumann_smatrix

UNITARITY_TOL = 1e-11
STOCHASTICITY_TOL = 1e-12
RESIDUAL_CAP = 1e-8
DEFAULT_K_TOL = 1e-10
ORBIT_PATH_CAP = 10_000_000

_TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# assembly


def _structural_matrix(graph: Graph, bonds: BondIndex, smatrices) -> np.ndarray:
    """k-independent part of U: S[b, b'] = sigma at the joint vertex, zero
    unless b' ends where b starts."""
    idmap = bonds.id_map()
    B = bonds.bond_count
    S = np.zeros((B, B), dtype=complex)
    for v in range(graph.vertex_count):
        nbrs = graph.neighbor_lists[v]
        sm = smatrices[v].entries
        for r, jo in enumerate(nbrs):
            row = idmap[(v, jo)]
            for c, ji in enumerate(nbrs):
                S[row, idmap[(ji, v)]] = sm[r, c]
    return S


@dataclass(frozen=True)
class QuantumGraph:
    """Graph + edge lengths + per-vertex unitary scattering matrices."""

    graph: Graph
    lengths: EdgeLengths
    smatrices: tuple
    bonds: BondIndex = field(init=False)

    def __post_init__(self):
        g = self.graph
        if len(self.smatrices) != g.vertex_count:
            raise ValueError("need one scattering matrix per vertex")
        for v, sm in enumerate(self.smatrices):
            if sm.degree != len(g.neighbor_lists[v]):
                raise ValueError(f"scattering matrix at vertex {v} has degree "
                                 f"{sm.degree}, vertex has degree {len(g.neighbor_lists[v])}")
        if len(self.lengths.lengths) != g.edge_count:
            raise ValueError("one length per edge required")
        bonds = BondIndex.from_graph(g)
        object.__setattr__(self, "bonds", bonds)
        object.__setattr__(self, "_structural", _structural_matrix(g, bonds, self.smatrices))
        object.__setattr__(self, "_bond_lengths", self.lengths.bond_lengths(bonds))

    @property
    def bond_count(self) -> int:
        return self.bonds.bond_count

    @property
    def bond_length_vector(self) -> np.ndarray:
        return self._bond_lengths

    @property
    def total_length(self) -> float:
        return self.lengths.total

    def unitary(self, k: float) -> np.ndarray:
        """Dense U(k) as a plain array."""
        return self._structural * np.exp(1j * k * self._bond_lengths)[None, :]


def neumann_smatrices(graph: Graph) -> tuple:
    return tuple(neumann_smatrix(len(nbrs)) for nbrs in graph.neighbor_lists)


def equitransmitting_smatrices(graph: Graph) -> tuple:
    """Equi-transmitting at every vertex of degree >= 2 (degree must be
    p + 1 for an odd prime p); degree-1 dead ends keep the Neumann
    reflection [1]."""
    out = []
    for nbrs in graph.neighbor_lists:
        d = len(nbrs)
        if d == 1:
            out.append(neumann_smatrix(1))
        else:
            out.append(equitransmitting_smatrix(d - 1))
    return tuple(out)


def make_quantum_graph(graph: Graph, lengths: EdgeLengths, boundary: str) -> QuantumGraph:
    if boundary == "neumann":
        sms = neumann_smatrices(graph)
    elif boundary == "equitransmitting":
        sms = equitransmitting_smatrices(graph)
    else:
        raise ValueError(f"unknown boundary {boundary!r}")
    return QuantumGraph(graph, lengths, sms)


# ---------------------------------------------------------------------------
# bond matrices


@dataclass(frozen=True)
class BondMatrix:
    """Dense B x B matrix on bond space; k records the wavenumber for U(k),
    None for k-independent matrices."""

    entries: np.ndarray
    k: float = None


def bond_scattering_matrix(qg: QuantumGraph, k: float) -> BondMatrix:
    u = qg.unitary(k)
    dev = float(np.abs(u @ u.conj().T - np.eye(len(u))).max())
    if dev > UNITARITY_TOL:
        raise NumericalError(f"U(k) deviates from unitarity by {dev:g}")
    return BondMatrix(u, k=k)


def markov_matrix(qg: QuantumGraph) -> BondMatrix:
    """Doubly stochastic matrix of squared moduli |u_{bb'}|^2 (k-independent)."""
    m = np.abs(qg._structural) ** 2
    dev = max(np.abs(m.sum(axis=0) - 1).max(), np.abs(m.sum(axis=1) - 1).max())
    if dev > STOCHASTICITY_TOL:
        raise NumericalError(f"Markov matrix deviates from double stochasticity by {dev:g}")
    return BondMatrix(m, k=None)


def _entries(m) -> np.ndarray:
    return m.entries if isinstance(m, BondMatrix) else np.asarray(m)


def markov_spectral_gap(m) -> float:
    """Contraction factor mu of the bond Markov chain: the operator 2-norm
    of R = M - ee^T/B.

    This is the quantity for which the mixing estimate
    ||M^t - ee^T/B|| <= mu^t holds for every t (submultiplicativity).
    Note M is not a normal matrix in general, so this norm can exceed
    the modulus of the second largest eigenvalue; see
    markov_eigenvalue_gap for the eigenvalue-based diagnostic.
    """
    m = _entries(m)
    B = m.shape[0]
    r = m - np.ones((B, B)) / B
    return float(np.linalg.norm(r, 2))


def markov_eigenvalue_gap(m) -> float:
    """Max modulus of spec(M) with one copy of the eigenvalue 1 removed.

    Governs the asymptotic mixing rate; < 1 iff the bond chain is
    irreducible and aperiodic (connected non-bipartite bond dynamics).
    """
    m = _entries(m)
    ev = np.linalg.eigvals(m)
    idx = int(np.argmin(np.abs(ev - 1.0)))
    rest = np.delete(ev, idx)
    if rest.size == 0:
        return 0.0
    return float(np.abs(rest).max())


# ---------------------------------------------------------------------------
# orbit sums


def _orbit_sum_column(qg: QuantumGraph, k: float, b_from: int, t: int, cap: int):
    """Sum over all t-step bond paths out of b_from of amplitude times
    phase, binned by final bond.  Paths traverse only transitions with
    nonzero scattering amplitude, so backtracking drops out by itself
    under equi-transmitting conditions."""
    bonds = qg.bonds
    idmap = bonds.id_map()
    B = bonds.bond_count
    lengths = qg._bond_lengths
    struct = qg._structural

    succ = [[] for _ in range(B)]  # successor bond ids and amplitudes
    for bp in range(B):
        head = bonds.bonds[bp][1]
        for w in qg.graph.neighbor_lists[head]:
            nxt = idmap[(head, w)]
            amp = struct[nxt, bp]
            if amp != 0:
                succ[bp].append((nxt, amp))

    # path-count guard via the support transfer matrix
    support = np.zeros((B, B))
    for bp in range(B):
        for nxt, _ in succ[bp]:
            support[nxt, bp] = 1.0
    v = np.zeros(B)
    v[b_from] = 1.0
    for _ in range(t):
        v = support @ v
    total_paths = v.sum()
    if total_paths > cap:
        raise NumericalError(f"orbit sum over {total_paths:.3g} paths exceeds cap {cap:g}")

    out = np.zeros(B, dtype=complex)

    def walk(bond, steps, amp, length):
        if steps == t:
            out[bond] += amp * np.exp(1j * k * length)
            return
        phase_len = lengths[bond]
        for nxt, a in succ[bond]:
            walk(nxt, steps + 1, amp * a, length + phase_len)

    walk(b_from, 0, 1.0 + 0j, 0.0)
    return out


def orbit_sum_entry(qg: QuantumGraph, k: float, b: int, b2: int, t: int,
                    cap: int = ORBIT_PATH_CAP) -> complex:
    """Entry (b, b2) of U(k)^t computed as an explicit sum over scattering
    paths; the amplitude of each path is the product of vertex matrix
    elements along it and its phase is k times the summed lengths of the
    bonds traversed before the final one."""
    if t < 1:
        raise ValueError("t must be >= 1")
    return complex(_orbit_sum_column(qg, k, b2, t, cap)[b])


# ---------------------------------------------------------------------------
# spectrum


def secular_function(qg: QuantumGraph, k: float) -> complex:
    """det(U(k) - I); a diagnostic, not the root-finder objective."""
    u = qg.unitary(k)
    return complex(np.linalg.det(u - np.eye(len(u))))


_COS_CLUSTER_TOL = 1e-7


def _unitary_eig(u: np.ndarray, with_vectors: bool = False):
    """Eigenvalues (optionally eigenvectors) of a unitary matrix.

    A unitary matrix is normal, so it shares eigenvectors with the
    Hermitian pair (U + U*)/2 and (U - U*)/2i whose eigenvalues are the
    cosines and sines of the eigenphases.  One Hermitian eigensolve plus
    a matrix product is several times cheaper than the general complex
    eigensolver at the sizes used here.  Clusters of nearly equal
    cosines (e.g. phase pairs +-theta) mix under the Hermitian solver
    and are repaired by diagonalizing the projected U-block; any
    remaining inconsistency falls back to the general solver.
    """
    hc = (u + u.conj().T) * 0.5
    hs = (u - u.conj().T) * (-0.5j)
    try:
        c, vecs = sla.eigh(hc, driver="evd", check_finite=False)
    except (sla.LinAlgError, ValueError):
        return _unitary_eig_general(u, with_vectors)
    s = np.real(np.sum(vecs.conj() * (hs @ vecs), axis=0))
    lam = c + 1j * s

    # consecutive cosines within tolerance form one invariant subspace
    splits = np.flatnonzero(np.diff(c) > _COS_CLUSTER_TOL) + 1
    for idx in np.split(np.arange(len(c)), splits):
        if len(idx) < 2:
            continue
        sub = vecs[:, idx]
        block = sub.conj().T @ (u @ sub)
        w_blk, r_blk = np.linalg.eig(block)
        lam[idx] = w_blk
        if with_vectors:
            vecs[:, idx] = sub @ r_blk

    if np.abs(np.abs(lam) - 1.0).max() > 1e-6:
        return _unitary_eig_general(u, with_vectors)
    if with_vectors:
        return lam, vecs
    return lam, None


def _unitary_eig_general(u: np.ndarray, with_vectors: bool):
    try:
        if with_vectors:
            w, v = sla.eig(u, check_finite=False)
            return w, v
        return sla.eigvals(u, check_finite=False), None
    except sla.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc


def eigenphases(qg: QuantumGraph, k: float, with_vectors: bool = False):
    """Phases of the unitary eigenvalues of U(k), sorted into [0, 2pi)."""
    u = qg.unitary(k)
    w, v = _unitary_eig(u, with_vectors)
    phases = np.mod(np.angle(w), _TWO_PI)
    order = np.argsort(phases)
    if with_vectors:
        return phases[order], v[:, order]
    return phases[order]


def eigenphase_velocities(qg: QuantumGraph, k: float):
    """(phases, velocities) with velocities <a_j, L a_j>, the exact rate
    d theta_j / dk for the convention used here; values lie in
    [L_min, L_max]."""
    phases, vecs = eigenphases(qg, k, with_vectors=True)
    lb = qg._bond_lengths
    norms = np.sum(np.abs(vecs) ** 2, axis=0)
    vel = np.real(np.einsum("bj,b,bj->j", vecs.conj(), lb, vecs)) / norms
    return phases, vel


@dataclass(frozen=True)
class EigenpairRecord:
    """One eigen-wavenumber with its fixed bond vector."""

    k: float
    a: np.ndarray
    residual: float
    multiplicity_hint: int
    index: int


class _SpectrumScanner:
    """Shared state for one find_eigenvalues run."""

    def __init__(self, qg: QuantumGraph, tol: float):
        self.qg = qg
        self.tol = tol
        self.lb = qg._bond_lengths
        self.two_ltot = float(self.lb.sum())  # = 2 L_tot
        self.lmax = float(self.lb.max())
        self.lmin = float(self.lb.min())
        self._cache = {}

    def probe(self, k: float):
        """(signed phases, sum of phases mod 2pi) at k, cached."""
        hit = self._cache.get(k)
        if hit is not None:
            return hit
        w, _ = _unitary_eig(self.qg.unitary(k))
        signed = np.angle(w)
        total = float(np.mod(signed, _TWO_PI).sum())
        self._cache[k] = (signed, total)
        return signed, total

    def count(self, k1: float, k2: float) -> int:
        """Exact number of eigenvalues in (k1, k2]."""
        _, s1 = self.probe(k1)
        _, s2 = self.probe(k2)
        raw = (s1 - s2 + self.two_ltot * (k2 - k1)) / _TWO_PI
        n = round(raw)
        if abs(raw - n) > 0.2:
            raise NumericalError(
                f"phase bookkeeping inconsistent in ({k1}, {k2}): count {raw}")
        return int(n)

    def _near_zero_count(self, signed: np.ndarray) -> int:
        window = max(20 * self.tol * self.lmax, 1e-12)
        return int(np.sum(np.abs(signed) <= window))

    def _branch_velocities(self, ka: float, idx: np.ndarray):
        """Measured d theta/dk for the branches idx at ka, from a probe
        displaced so little that nearest-phase matching is unambiguous
        (movement at most a few percent of the mean phase spacing)."""
        signed, _ = self.probe(ka)
        B = len(signed)
        spacing = _TWO_PI / B
        h = 0.02 * spacing / self.lmax
        moved, _ = self.probe(ka + h)
        vels = np.empty(len(idx))
        for i, j in enumerate(idx):
            diff = np.angle(np.exp(1j * (moved - signed[j])))
            vels[i] = diff[np.argmin(np.abs(diff))] / h
        return vels

    def _newton_from(self, k0: float, v0: float, ka: float, kb: float):
        """Newton iteration on the phase nearest zero, starting at k0 with
        velocity guess v0; returns (root, near_zero_count) or None if it
        leaves (ka, kb] or fails to settle."""
        v = min(max(v0, 0.3 * self.lmin), 3.0 * self.lmax)
        k, k_prev, phi_prev, step_prev = k0, None, None, None
        for _ in range(12):
            k = min(max(k, ka + 1e-18), kb)
            signed, _ = self.probe(k)
            j = int(np.argmin(np.abs(signed)))
            phi = float(signed[j])
            if abs(phi) <= 0.5 * self.lmin * self.tol:
                root = min(max(k - phi / v, ka), kb)
                return root, self._near_zero_count(signed)
            if k_prev is not None and k != k_prev:
                v_est = (phi - phi_prev) / (k - k_prev)
                if 0.3 * self.lmin <= v_est <= 3.0 * self.lmax:
                    v = v_est
            k_prev, phi_prev = k, phi
            step = -phi / v
            k_new = k + step
            if not (ka - self.tol <= k_new <= kb + self.tol):
                return None
            if abs(step) <= 0.25 * self.tol:
                root = min(max(k_new, ka), kb)
                return root, self._near_zero_count(signed)
            if step_prev is not None and abs(step) <= 1e-3 * abs(step_prev):
                # quadratic regime: the conservative proxy step^2/step_prev
                # overestimates the error after this correction
                if step * step / abs(step_prev) <= 0.05 * self.tol:
                    root = min(max(k_new, ka), kb)
                    return root, self._near_zero_count(signed)
            step_prev = step
            k = k_new
        return None

    def refine_single(self, ka: float, kb: float):
        """Locate the unique root in (ka, kb]: identify the crossing branch
        among the near-zero phases at ka (by measured velocity when more
        than one is in reach), Newton-polish it, and fall back to exact
        count bisection whenever the identification is ambiguous.
        Returns (root, near_zero_phase_count)."""
        w = kb - ka
        signed, _ = self.probe(ka)
        reach = 1.05 * self.lmax * w + 1e-15
        cand = np.flatnonzero((signed <= -1e-13) & (signed >= -reach))
        result = None
        if len(cand) == 1:
            j = int(cand[0])
            # landing guess from the cached right endpoint, else mean speed
            sb, _ = self.probe(kb)
            pos = sb[(sb > 0) & (sb <= reach)]
            v0 = (float(pos.min()) - signed[j]) / w if len(pos) else \
                self.two_ltot / len(signed)
            result = self._newton_from(ka - signed[j] / v0, v0, ka, kb)
        elif len(cand) > 1:
            # Newton stays inside (ka, kb] and the window holds exactly one
            # root, so any converged attempt is that root; try the branches
            # in predicted-crossing order
            vels = self._branch_velocities(ka, cand)
            times = -signed[cand] / vels
            order = np.argsort(np.abs(times - 0.5 * w))
            for i in order[:2]:
                if times[i] > 1.5 * w:
                    continue
                result = self._newton_from(ka + min(float(times[i]), w),
                                           float(vels[i]), ka, kb)
                if result is not None:
                    break
        if result is None:
            result = self._bisect_single(ka, kb)
        return result

    def _bisect_single(self, ka: float, kb: float):
        """Exact-count bisection for one root in (ka, kb]."""
        while kb - ka > self.tol:
            km = 0.5 * (ka + kb)
            if self.count(ka, km) >= 1:
                kb = km
            else:
                ka = km
        signed, _ = self.probe(ka)
        return 0.5 * (ka + kb), self._near_zero_count(signed)

    def localize(self, ka: float, kb: float, m: int, out: list):
        """Split (ka, kb] with m roots into singles; clusters tighter than
        the merge width are returned as repeated estimates."""
        if m == 0:
            return
        if m == 1:
            out.append(self.refine_single(ka, kb))
            return
        if kb - ka <= 10 * self.tol:
            k = 0.5 * (ka + kb)
            out.extend([(k, m)] * m)
            return
        km = 0.5 * (ka + kb)
        ml = self.count(ka, km)
        self.localize(ka, km, ml, out)
        self.localize(km, kb, m - ml, out)


def _eigenvector_near_one(u: np.ndarray, rng: np.random.Generator):
    """Unit vector for the eigenvalue of U nearest 1, by shifted inverse
    iteration; falls back to a full eigendecomposition if the iteration
    does not reach the residual cap."""
    B = u.shape[0]
    a = u - np.eye(B)
    x = rng.normal(size=B) + 1j * rng.normal(size=B)
    x /= np.linalg.norm(x)
    try:
        lu = sla.lu_factor(a, check_finite=False)
        for _ in range(3):
            x = sla.lu_solve(lu, x, check_finite=False)
            x /= np.linalg.norm(x)
            res = float(np.linalg.norm(u @ x - x))
            if res <= RESIDUAL_CAP / 10:
                return x, res
    except (sla.LinAlgError, ValueError):
        pass
    w, v = sla.eig(u, check_finite=False)
    j = int(np.argmin(np.abs(w - 1.0)))
    x = v[:, j] / np.linalg.norm(v[:, j])
    return x, float(np.linalg.norm(u @ x - x))


def scan_step(qg: QuantumGraph) -> float:
    """Velocity-bound grid step: pi / (2 max(2 L_max, L_tot))."""
    return math.pi / (2.0 * max(2.0 * float(qg.lengths.lengths.max()), qg.total_length))


def count_eigenvalues(qg: QuantumGraph, k1: float, k2: float) -> int:
    """Exact number of eigenvalues in (k1, k2] from endpoint phase sums."""
    if not 0 < k1 < k2:
        raise ValueError("need 0 < k1 < k2")
    return _SpectrumScanner(qg, DEFAULT_K_TOL).count(k1, k2)


def find_eigenvalues(qg: QuantumGraph, k_min: float, k_max: float,
                     tol: float = DEFAULT_K_TOL, max_halvings: int = 10) -> list:
    """All eigen-wavenumbers in [k_min, k_max] with their fixed vectors.

    Grid scan at the velocity-bound step, exact per-window root counts
    from the phase-sum identity, false-position refinement, clusters
    within 10 tol merged into one record with a multiplicity hint.
    k = 0 is never an eigenvalue of the metric graph and k_min must be
    positive.
    """
    if not 0 < k_min < k_max:
        raise ValueError("need 0 < k_min < k_max")
    if tol <= 0:
        raise ValueError("tol must be positive")

    step = scan_step(qg)
    last_err = None
    for _ in range(max_halvings):
        try:
            roots = _scan_roots(qg, k_min, k_max, tol, step)
            break
        except NumericalError as exc:
            last_err = exc
            step /= 2.0
    else:
        raise NumericalError(f"spectral scan failed after {max_halvings} step "
                             f"halvings: {last_err}")

    # merge clusters within 10 tol
    clusters = []
    for k, phase_mult in sorted(roots):
        if clusters and k - clusters[-1][-1][0] <= 10 * tol:
            clusters[-1].append((k, phase_mult))
        else:
            clusters.append([(k, phase_mult)])

    rng = np.random.default_rng(0x5EED)
    records = []
    for idx, cluster in enumerate(clusters, start=1):
        k_n = float(np.mean([k for k, _ in cluster]))
        u = qg.unitary(k_n)
        a, residual = _eigenvector_near_one(u, rng)
        if residual > RESIDUAL_CAP:
            raise NumericalError(
                f"eigenvector residual {residual:g} exceeds {RESIDUAL_CAP:g} at k={k_n}")
        mult = max(len(cluster), max(pm for _, pm in cluster), 1)
        records.append(EigenpairRecord(k=k_n, a=a, residual=residual,
                                       multiplicity_hint=mult, index=idx))
    return records


def _scan_roots(qg: QuantumGraph, k_min: float, k_max: float, tol: float,
                step: float) -> list:
    scanner = _SpectrumScanner(qg, tol)
    n_steps = max(1, math.ceil((k_max - k_min) / step))
    grid = np.linspace(k_min, k_max, n_steps + 1)
    roots = []
    for ka, kb in zip(grid[:-1], grid[1:]):
        m = scanner.count(float(ka), float(kb))
        scanner.localize(float(ka), float(kb), m, roots)
    # roots on (k_min, k_max]; keep any root that refined onto k_min itself out
    return [(k, pm) for k, pm in roots if k > k_min]


# ---------------------------------------------------------------------------
# Monte Carlo moments of u^(t) over random lengths


def monte_carlo_ut_moments(graph: Graph, smatrices, length_distribution: UniformLengths,
                           k: float, t: int, trials: int, seed) -> dict:
    """Sample moments of the entries of U(k)^t over i.i.d. length draws.

    Returns mean_abs = |E(u^(t))| and mean_sq = E(|u^(t)|^2), both B x B.
    Requires the equi-transmitting setting (every vertex of degree >= 2).
    """
    if trials < 100:
        raise ValueError("need at least 100 trials")
    for sm in smatrices:
        if sm.degree >= 2 and sm.kind != EQUI_TRANSMITTING:
            raise ValueError("moment bounds apply to equi-transmitting scattering only")
    bonds = BondIndex.from_graph(graph)
    struct = _structural_matrix(graph, bonds, smatrices)
    edge_of = bonds.edge_of
    rng = np.random.default_rng(seed)
    B = bonds.bond_count
    acc_mean = np.zeros((B, B), dtype=complex)
    acc_sq = np.zeros((B, B))
    for _ in range(trials):
        lens = length_distribution.sample(graph.edge_count, rng)
        u = struct * np.exp(1j * k * lens[edge_of])[None, :]
        ut = np.linalg.matrix_power(u, t)
        acc_mean += ut
        acc_sq += np.abs(ut) ** 2
    return {"mean_abs": np.abs(acc_mean / trials), "mean_sq": acc_sq / trials}
