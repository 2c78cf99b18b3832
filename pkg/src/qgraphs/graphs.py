"""Combinatorial graphs, bond (directed edge) indexing and edge lengths.

A graph is simple and undirected: symmetric 0/1 adjacency with zero
diagonal.  Every edge {i, j} carries two bonds (oriented copies) [i, j]
and [j, i]; bond-level quantities (scattering matrices, Markov chains,
non-backtracking walks) live on the B = 2|E| bonds.

Bond ordering convention: edges are sorted lexicographically and each
edge contributes its [min, max] orientation first, so bond 2e and
2e + 1 are mutual reversals.  All matrix layouts in the package depend
on this ordering being stable.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import GenerationError

_REGULAR_RETRY_CAP = 10_000


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph given by its adjacency matrix."""

    vertex_count: int
    adjacency: np.ndarray
    neighbor_lists: tuple = field(init=False)

    def __post_init__(self):
        a = np.asarray(self.adjacency, dtype=np.int8)
        if a.shape != (self.vertex_count, self.vertex_count):
            raise ValueError("adjacency shape does not match vertex_count")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(a) != 0):
            raise ValueError("adjacency must have zero diagonal (no loops)")
        if not np.all((a == 0) | (a == 1)):
            raise ValueError("adjacency entries must be 0 or 1")
        object.__setattr__(self, "adjacency", a)
        nbrs = tuple(tuple(int(j) for j in np.flatnonzero(a[i])) for i in range(self.vertex_count))
        object.__setattr__(self, "neighbor_lists", nbrs)

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1).astype(int)

    @property
    def edges(self) -> list:
        """Edges as sorted (i, j) pairs with i < j, lexicographic order."""
        i, j = np.nonzero(np.triu(self.adjacency))
        return list(zip(i.tolist(), j.tolist()))

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.sum()) // 2

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        seen = np.zeros(self.vertex_count, dtype=bool)
        stack = [0]
        seen[0] = True
        while stack:
            v = stack.pop()
            for w in self.neighbor_lists[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        return bool(seen.all())


def graph_from_edges(vertex_count: int, edges) -> Graph:
    """Build a Graph from an iterable of (i, j) pairs."""
    a = np.zeros((vertex_count, vertex_count), dtype=np.int8)
    for i, j in edges:
        if i == j:
            raise ValueError(f"loop edge ({i}, {j}) not allowed")
        if a[i, j]:
            raise ValueError(f"duplicate edge ({i}, {j})")
        a[i, j] = a[j, i] = 1
    return Graph(vertex_count, a)


@dataclass(frozen=True)
class BondIndex:
    """Directed-edge (bond) indexing of a graph.

    bonds[b] = (tail, head); reversal[b] is the index of the reversed
    bond; edge_of[b] is the undirected edge id shared by both
    orientations.
    """

    bonds: tuple
    reversal: np.ndarray
    edge_of: np.ndarray

    @classmethod
    def from_graph(cls, g: Graph) -> "BondIndex":
        bonds = []
        for (i, j) in g.edges:
            bonds.append((i, j))
            bonds.append((j, i))
        B = len(bonds)
        rev = np.arange(B)
        rev[0::2] += 1
        rev[1::2] -= 1
        edge_of = np.arange(B) // 2
        return cls(tuple(bonds), rev, edge_of)

    @property
    def bond_count(self) -> int:
        return len(self.bonds)

    @property
    def tails(self) -> np.ndarray:
        return np.array([b[0] for b in self.bonds])

    @property
    def heads(self) -> np.ndarray:
        return np.array([b[1] for b in self.bonds])

    def bond_id(self, tail: int, head: int) -> int:
        try:
            return self.bonds.index((tail, head))
        except ValueError:
            raise KeyError(f"no bond ({tail}, {head})") from None

    def id_map(self) -> dict:
        return {b: k for k, b in enumerate(self.bonds)}


@dataclass(frozen=True)
class EdgeLengths:
    """Positive edge lengths; both orientations of an edge share one length."""

    lengths: np.ndarray

    def __post_init__(self):
        lens = np.asarray(self.lengths, dtype=float)
        if lens.ndim != 1 or lens.size == 0:
            raise ValueError("lengths must be a non-empty 1-d array")
        if np.any(lens <= 0):
            raise ValueError("all edge lengths must be positive")
        object.__setattr__(self, "lengths", lens)

    @property
    def total(self) -> float:
        return float(self.lengths.sum())

    @property
    def mean(self) -> float:
        return float(self.lengths.mean())

    @property
    def relative_spread(self) -> float:
        """max |L_e - L_e'| / mean, the spread entering |L(a) - 1| bounds."""
        return float((self.lengths.max() - self.lengths.min()) / self.mean)

    def bond_lengths(self, bonds: BondIndex) -> np.ndarray:
        """Per-bond length vector (edge length on both orientations)."""
        if len(self.lengths) * 2 != bonds.bond_count:
            raise ValueError("lengths do not match bond index")
        return self.lengths[bonds.edge_of]


@dataclass(frozen=True)
class UniformLengths:
    """Uniform(lo, hi) edge-length distribution.

    lo > 0 plays the role of the hard floor delta: P(L < lo) = 0.
    """

    lo: float
    hi: float

    def __post_init__(self):
        if not (0 < self.lo < self.hi):
            raise ValueError("need 0 < lo < hi")

    def sample(self, count: int, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lo, self.hi, size=count)

    def char_abs(self, k: float) -> float:
        """|E(e^{ikL})| for this distribution."""
        span = self.hi - self.lo
        x = k * span / 2
        if x == 0:
            return 1.0
        return abs(math.sin(x) / x)

    def envelope(self, k: float) -> float:
        """Monotone decreasing envelope f with f(0)=1 and |E(e^{ikL})| <= f(|k|)."""
        span = self.hi - self.lo
        if k == 0:
            return 1.0
        return min(1.0, 2.0 / (abs(k) * span))


def sample_lengths(edge_count: int, distribution: UniformLengths, seed) -> EdgeLengths:
    """Draw i.i.d. edge lengths; deterministic under seed."""
    rng = np.random.default_rng(seed)
    return EdgeLengths(distribution.sample(edge_count, rng))


# ---------------------------------------------------------------------------
# generators


def star_graph(edge_count: int) -> Graph:
    """Star: vertex 0 is the center of degree edge_count, leaves have degree 1."""
    if edge_count < 1:
        raise ValueError("edge_count must be >= 1")
    return graph_from_edges(edge_count + 1, [(0, i + 1) for i in range(edge_count)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return graph_from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    if n < 2:
        raise ValueError("complete graph needs n >= 2")
    return graph_from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def _pair_stubs(n: int, d: int, rng: np.random.Generator):
    """One configuration-model pairing attempt: match stubs in shuffled
    pairs, re-shuffling the stubs of rejected pairs (loops, repeats)
    until all are placed or no placement remains.  Returns the edge set
    or None on failure."""
    edges = set()
    stubs = np.repeat(np.arange(n), d)
    while stubs.size:
        rng.shuffle(stubs)
        leftover = []
        for s1, s2 in stubs.reshape(-1, 2):
            a, b = (int(s1), int(s2)) if s1 < s2 else (int(s2), int(s1))
            if a != b and (a, b) not in edges:
                edges.add((a, b))
            else:
                leftover.extend((a, b))
        if not leftover:
            return edges
        counts = {}
        for s in leftover:
            counts[s] = counts.get(s, 0) + 1
        placeable = any(
            a != b and (min(a, b), max(a, b)) not in edges
            for a in counts for b in counts
        )
        if not placeable:
            return None
        stubs = np.array(leftover)
    return edges


def random_regular_graph(n: int, d: int, seed) -> Graph:
    """Random simple connected d-regular graph on n vertices.

    Configuration-model stub pairing with rejection of loops, multi
    edges and disconnected outcomes; attempts capped at 10000.
    """
    if (n * d) % 2 != 0:
        raise ValueError("n * d must be even for a d-regular graph")
    if not 0 < d < n:
        raise ValueError("need 0 < d < n")
    rng = np.random.default_rng(seed)
    for _ in range(_REGULAR_RETRY_CAP):
        edges = _pair_stubs(n, d, rng)
        if edges is None:
            continue
        g = graph_from_edges(n, sorted(edges))
        if g.is_connected():
            return g
    raise GenerationError(
        f"no simple connected {d}-regular graph found on {n} vertices "
        f"after {_REGULAR_RETRY_CAP} pairings"
    )


# ---------------------------------------------------------------------------
# invariants


def girth(g: Graph):
    """Length of the shortest cycle; math.inf for forests.

    BFS from every vertex with parent-edge tracking; the first non-tree
    edge seen from root r closes a cycle of length dist[u] + dist[w] + 1,
    and the minimum over all roots is the girth.
    """
    n = g.vertex_count
    edges = g.edges
    eid = {}
    for k, (i, j) in enumerate(edges):
        eid[(i, j)] = k
        eid[(j, i)] = k
    best = math.inf
    for root in range(n):
        dist = {root: 0}
        par = {root: -1}
        q = deque([root])
        while q:
            u = q.popleft()
            if 2 * dist[u] >= best:
                continue
            for w in g.neighbor_lists[u]:
                e = eid[(u, w)]
                if e == par[u]:
                    continue
                if w in dist:
                    best = min(best, dist[u] + dist[w] + 1)
                else:
                    dist[w] = dist[u] + 1
                    par[w] = e
                    q.append(w)
    return best if best < math.inf else math.inf


def adjacency_spectral_gap(g: Graph, d: int) -> float:
    """Modulus of the second largest eigenvalue of A/d for a d-regular graph.

    The Perron eigenvalue 1 is removed exactly once; the result lies in
    [0, 1] and equals 1 iff the graph is bipartite or disconnected.
    """
    degs = g.degrees
    if not np.all(degs == d):
        raise ValueError(f"graph is not {d}-regular")
    spec = np.linalg.eigvalsh(g.adjacency.astype(float) / d)
    idx = int(np.argmin(np.abs(spec - 1.0)))
    rest = np.delete(spec, idx)
    if rest.size == 0:
        return 0.0
    return float(np.abs(rest).max())


# ---------------------------------------------------------------------------
# non-backtracking walks


def nonbacktracking_transition_matrix(g: Graph, bonds: BondIndex = None) -> np.ndarray:
    """0/1 matrix T with T[b, b'] = 1 iff b continues b' without backtracking,
    i.e. b starts where b' ends and b != reversal(b')."""
    if bonds is None:
        bonds = BondIndex.from_graph(g)
    B = bonds.bond_count
    tails = bonds.tails
    heads = bonds.heads
    T = (tails[:, None] == heads[None, :]).astype(np.float64)
    T[bonds.reversal, np.arange(B)] = 0.0
    return T


def count_nonbacktracking_paths(g: Graph, b: int, b2: int, t: int) -> int:
    """Number of non-backtracking bond paths from b2 to b in t steps."""
    if t < 1:
        raise ValueError("t must be >= 1")
    bonds = BondIndex.from_graph(g)
    T = nonbacktracking_transition_matrix(g, bonds)
    v = np.zeros(bonds.bond_count)
    v[b2] = 1.0
    for _ in range(t):
        v = T @ v
    return int(round(v[b]))


def enumerate_nonbacktracking_paths(g: Graph, b: int, b2: int, t: int) -> list:
    """Explicit list of non-backtracking bond paths (b2, ..., b) of t steps.

    Brute-force oracle for the transfer-matrix count; only intended for
    small graphs and small t.
    """
    bonds = BondIndex.from_graph(g)
    idmap = bonds.id_map()
    rev = bonds.reversal
    out = []

    def extend(path):
        last = path[-1]
        if len(path) == t + 1:
            if last == b:
                out.append(tuple(path))
            return
        head = bonds.bonds[last][1]
        for w in g.neighbor_lists[head]:
            nxt = idmap[(head, w)]
            if nxt == rev[last]:
                continue
            path.append(nxt)
            extend(path)
            path.pop()

    extend([b2])
    return out
