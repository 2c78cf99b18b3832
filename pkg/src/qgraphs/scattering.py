"""Vertex scattering matrices.

Two k-independent families are provided: Neumann (continuity plus
vanishing derivative sum, entries 2/d - delta) and equi-transmitting
(zero backscattering, equal transmission probability 1/(d-1), built
from the Legendre symbol for degree d = p + 1 with p an odd prime).
Arbitrary unitary matrices are accepted through custom_smatrix.

Rows and columns are both indexed by the vertex's sorted neighbor
list: row = outgoing neighbor, column = incoming neighbor, so the
diagonal is always the backscattering channel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

UNITARY_TOL_EXACT = 1e-12
UNITARY_TOL_CUSTOM = 1e-10

NEUMANN = "Neumann"
EQUI_TRANSMITTING = "EquiTransmitting"
CUSTOM = "Custom"


@dataclass(frozen=True)
class VertexSMatrix:
    """Unitary d x d vertex scattering matrix."""

    degree: int
    entries: np.ndarray
    kind: str
    prime: int = None  # recorded for the equi-transmitting construction

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (self.degree, self.degree):
            raise ValueError("entries shape does not match degree")
        object.__setattr__(self, "entries", m)

    def unitarity_deviation(self) -> float:
        d = self.degree
        return float(np.abs(self.entries @ self.entries.conj().T - np.eye(d)).max())


def unitarity_deviation(m: np.ndarray) -> float:
    m = np.asarray(m, dtype=complex)
    return float(np.abs(m @ m.conj().T - np.eye(m.shape[0])).max())


def neumann_smatrix(d: int) -> VertexSMatrix:
    """Neumann vertex matrix: 2/d off the diagonal, 2/d - 1 on it."""
    if d < 1:
        raise ValueError("degree must be >= 1")
    m = np.full((d, d), 2.0 / d) - np.eye(d)
    return VertexSMatrix(d, m, NEUMANN)


def is_odd_prime(p: int) -> bool:
    if p < 3 or p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def legendre_symbol(k: int, p: int) -> int:
    """Quadratic residue indicator mod an odd prime, via Euler's criterion."""
    if not is_odd_prime(p):
        raise ValueError(f"p = {p} is not an odd prime")
    k = k % p
    if k == 0:
        return 0
    return 1 if pow(k, (p - 1) // 2, p) == 1 else -1


def equitransmitting_smatrix(p: int) -> VertexSMatrix:
    """Equi-transmitting matrix of degree p + 1 from the Legendre symbol.

    The matrix is (1/sqrt(p)) times a border of ones around the
    circulant-like block C[i, j] = chi(i - j), i, j = 0..p-1.  Zero
    diagonal, all off-diagonal squared moduli equal to 1/p; validated
    unitary before returning.
    """
    if not is_odd_prime(p):
        raise ValueError(f"p = {p} is not an odd prime")
    d = p + 1
    idx = np.arange(p)
    chi = np.array([legendre_symbol(k, p) for k in range(p)], dtype=float)
    c = chi[(idx[:, None] - idx[None, :]) % p]
    m = np.zeros((d, d))
    m[0, 1:] = 1.0
    m[1:, 0] = 1.0
    m[1:, 1:] = c
    m /= np.sqrt(p)
    sm = VertexSMatrix(d, m, EQUI_TRANSMITTING, prime=p)
    dev = sm.unitarity_deviation()
    if dev > UNITARY_TOL_EXACT:
        raise ValueError(f"equi-transmitting construction not unitary: max deviation {dev:g}")
    return sm


def custom_smatrix(entries) -> VertexSMatrix:
    """Wrap an arbitrary unitary matrix; rejected if not unitary within 1e-10."""
    m = np.asarray(entries, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("entries must be a square matrix")
    dev = unitarity_deviation(m)
    if dev > UNITARY_TOL_CUSTOM:
        raise ValueError(f"matrix is not unitary: max deviation {dev:g}")
    return VertexSMatrix(m.shape[0], m, CUSTOM)
