"""Computational basis, single-site embeddings and product initial states.

Basis convention: site 1 is the most significant bit of the basis index
and spin up maps to bit 0, so ``|up up ... up>`` is index 0 and
``sigma_z |up> = +|up>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DomainError

NORM_TOL = 1e-12

_PAULI = {
    "x": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "y": np.array([[0.0, -1.0j], [1.0j, 0.0]]),
    "z": np.array([[1.0, 0.0], [0.0, -1.0]]),
}

PATTERNS = ("up", "dw", "pm")


@dataclass(frozen=True)
class PureState:
    """Unit-norm amplitude vector in a ``2**n_sites`` (or ``d``) dimensional space."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1 or amps.size == 0:
            raise DomainError("amplitudes must be a nonempty 1-d vector")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"state norm {norm!r} differs from 1 by more than {NORM_TOL}")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def n_sites(self) -> int:
        d = self.dim
        if d & (d - 1):
            raise DomainError(f"dimension {d} is not a power of two")
        return d.bit_length() - 1


def pauli(axis: str) -> np.ndarray:
    """Return the 2x2 Pauli matrix for ``axis`` in ``{"x", "y", "z"}``."""
    try:
        return _PAULI[axis.lower()].copy()
    except (KeyError, AttributeError):
        raise DomainError(f"unknown Pauli axis {axis!r}") from None


def embed_single_site(op, site: int, n_sites: int) -> np.ndarray:
    """Kronecker-embed a 2x2 operator at ``site`` (1-based, leftmost factor is site 1)."""
    op = np.asarray(op)
    if op.shape != (2, 2):
        raise DomainError(f"single-site operator must be 2x2, got shape {op.shape}")
    if not 1 <= site <= n_sites:
        raise DomainError(f"site index {site} outside 1..{n_sites}")
    eye = np.eye(2, dtype=op.dtype)
    factors = [op if k == site else eye for k in range(1, n_sites + 1)]
    return reduce(np.kron, factors)


def is_hermitian(mat, tol: float = 1e-12) -> bool:
    mat = np.asarray(mat)
    return mat.ndim == 2 and mat.shape[0] == mat.shape[1] and bool(
        np.max(np.abs(mat - mat.conj().T), initial=0.0) < tol
    )


def pattern_bits(pattern: str, n_sites: int) -> list[int]:
    """Spin pattern as bits (0 = up), site 1 first."""
    key = pattern.lower()
    if key == "up":
        return [0] * n_sites
    if key == "dw":
        return [1] * n_sites
    if key == "pm":
        return [k % 2 for k in range(n_sites)]
    raise DomainError(f"unknown product-state pattern {pattern!r}; expected one of {PATTERNS}")


def basis_index(bits) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | int(b)
    return idx


def product_state(pattern: str, n_sites: int) -> PureState:
    """``Up``, ``Dw`` or ``Pm`` (alternating, up on site 1) as a basis vector."""
    if n_sites < 1:
        raise DomainError("n_sites must be at least 1")
    amps = np.zeros(2**n_sites, dtype=complex)
    amps[basis_index(pattern_bits(pattern, n_sites))] = 1.0
    return PureState(amps)


def down_counts(n_sites: int) -> np.ndarray:
    """Number of down spins in every basis index."""
    idx = np.arange(2**n_sites)
    counts = np.zeros(idx.shape, dtype=np.int64)
    for k in range(n_sites):
        counts += (idx >> k) & 1
    return counts
