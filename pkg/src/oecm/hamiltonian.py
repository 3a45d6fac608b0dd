"""Ising chain with transverse and longitudinal fields, and its spectrum."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, NumericalError
from .hilbert import embed_single_site, is_hermitian, pauli

GROUPING_TOL = 1e-10

DEFAULT_G = (5.0 + math.sqrt(5.0)) / 8.0
DEFAULT_H = (1.0 + math.sqrt(5.0)) / 4.0
DEFAULT_J = 1.0


@dataclass(frozen=True)
class SpinChainSpec:
    n_sites: int
    g: float = DEFAULT_G
    h: float = DEFAULT_H
    j: float = DEFAULT_J

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 2:
            raise DomainError(f"n_sites must be an integer >= 2, got {self.n_sites!r}")


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigen-decomposition with eigenvalues grouped into distinct levels.

    ``eigenvectors[:, level_offsets[i]:level_offsets[i + 1]]`` spans level
    ``i``; ``raw_eigenvalues`` keeps the ungrouped value of every column.
    """

    energies: np.ndarray
    degeneracies: np.ndarray
    eigenvectors: np.ndarray
    level_offsets: np.ndarray
    raw_eigenvalues: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvectors.shape[0]

    @property
    def n_levels(self) -> int:
        return self.energies.shape[0]

    @property
    def spectral_range(self) -> float:
        return float(self.raw_eigenvalues[-1] - self.raw_eigenvalues[0])

    @property
    def nondegenerate(self) -> bool:
        return self.n_levels == self.dim

    def level_labels(self) -> np.ndarray:
        """Level index of every eigenvector column."""
        return np.repeat(np.arange(self.n_levels), self.degeneracies)

    def block(self, i: int) -> np.ndarray:
        return self.eigenvectors[:, self.level_offsets[i] : self.level_offsets[i + 1]]

    def projector(self, i: int) -> np.ndarray:
        cols = self.block(i)
        return cols @ cols.conj().T

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * np.repeat(self.energies, self.degeneracies)) @ v.conj().T


@dataclass(frozen=True)
class SpectralStatistics:
    n_levels: int
    distinct_gaps: np.ndarray
    gap_tolerance: float
    n_pair_gaps: int

    @property
    def gaps_nondegenerate(self) -> bool:
        """True when no two level pairs share a gap (within tolerance)."""
        return self.distinct_gaps.shape[0] == self.n_pair_gaps


def build_ising(spec: SpinChainSpec) -> np.ndarray:
    """Dense Hamiltonian; real symmetric because only sigma_x and sigma_z enter.

    H = g sum_i X_i + h sum_{i=2}^{N-1} Z_i + J sum_i Z_i Z_{i+1} + (h - J)(Z_1 + Z_N)
    """
    n = spec.n_sites
    sx, sz = pauli("x").real, pauli("z").real
    # sigma_z embeddings are diagonal; keep only their diagonals
    zs = [np.diag(embed_single_site(sz, i, n)) for i in range(1, n + 1)]
    ham = np.zeros((2**n, 2**n))
    for i in range(1, n + 1):
        ham += spec.g * embed_single_site(sx, i, n)
    diag = np.zeros(2**n)
    for i in range(2, n):
        diag += spec.h * zs[i - 1]
    for i in range(1, n):
        diag += spec.j * zs[i - 1] * zs[i]
    diag += (spec.h - spec.j) * (zs[0] + zs[n - 1])
    ham[np.diag_indices_from(ham)] += diag
    return ham


def group_sorted(values, rel_tol: float):
    """Merge sorted values whose neighbours differ by less than ``rel_tol * range``.

    Returns ``(means, offsets)``; ``offsets`` has one trailing entry equal to
    ``len(values)``.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return np.empty(0), np.zeros(1, dtype=np.int64)
    spread = float(values[-1] - values[0])
    if spread > 0:
        means, starts = _kernels.merge_sorted(values, rel_tol * spread)
    else:
        means, starts = np.array([values.mean()]), np.zeros(1, dtype=np.int64)
    return means, np.append(starts, values.size).astype(np.int64)


def diagonalize(ham, grouping_tol: float = GROUPING_TOL) -> SpectralDecomposition:
    ham = np.asarray(ham)
    if grouping_tol <= 0:
        raise DomainError("grouping_tol must be positive")
    if not is_hermitian(ham, tol=1e-12 * max(1.0, float(np.max(np.abs(ham), initial=0.0)))):
        raise DomainError("Hamiltonian is not Hermitian")
    try:
        raw, vecs = np.linalg.eigh(ham)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    energies, offsets = group_sorted(raw, grouping_tol)
    return SpectralDecomposition(
        energies=energies,
        degeneracies=np.diff(offsets),
        eigenvectors=vecs,
        level_offsets=offsets,
        raw_eigenvalues=raw,
    )


def spectral_statistics(decomp: SpectralDecomposition, rel_tol: float = GROUPING_TOL) -> SpectralStatistics:
    """All positive level gaps E_a - E_b (a > b), sorted and deduplicated."""
    gaps = np.sort(_kernels.pair_gaps(np.ascontiguousarray(decomp.energies)))
    tol = rel_tol * max(decomp.spectral_range, 0.0)
    distinct, _ = _kernels.merge_sorted(gaps, tol) if gaps.size else (gaps, None)
    return SpectralStatistics(
        n_levels=decomp.n_levels,
        distinct_gaps=distinct,
        gap_tolerance=tol,
        n_pair_gaps=gaps.shape[0],
    )


def gap_count(stats: SpectralStatistics, epsilon: float) -> int:
    """Largest number of distinct gaps inside any closed window of width epsilon."""
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    if stats.distinct_gaps.size == 0:
        warnings.warn("spectrum has a single level; gap count is 0", RuntimeWarning, stacklevel=2)
        return 0
    return int(_kernels.max_window_count(stats.distinct_gaps, float(epsilon)))


def spectral_factor(stats: SpectralStatistics, epsilon: float, T):
    """f(eps, T) = N(eps) (1 + 8 log2(n) / (eps T)); vectorised over T."""
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    T = np.asarray(T, dtype=float)
    if np.any(~(T > 0)):
        raise DomainError("averaging time T must be positive")
    if stats.n_levels < 2:
        raise DomainError("spectral factor needs at least two levels")
    f = gap_count(stats, epsilon) * (1.0 + 8.0 * math.log2(stats.n_levels) / (epsilon * T))
    return float(f) if f.ndim == 0 else f


def epsilon_grid(stats: SpectralStatistics, n_points: int = 32) -> np.ndarray:
    """Log-spaced candidate windows from the smallest gap to the largest."""
    gaps = stats.distinct_gaps
    if gaps.size == 0:
        raise DomainError("no gaps to build an epsilon grid from")
    return np.geomspace(gaps[0], gaps[-1], n_points)


def minimal_spectral_factor(stats: SpectralStatistics, T, n_points: int = 32):
    """Per-T minimum of f over :func:`epsilon_grid`; returns ``(f, epsilon)`` arrays.

    T = 0 entries get ``f = inf`` and the first grid epsilon.
    """
    T = np.atleast_1d(np.asarray(T, dtype=float))
    eps_grid = epsilon_grid(stats, n_points)
    counts = np.array([gap_count(stats, e) for e in eps_grid], dtype=float)
    log_n = math.log2(stats.n_levels)
    best_f = np.full(T.shape, np.inf)
    best_eps = np.full(T.shape, eps_grid[0])
    pos = T > 0
    for e, c in zip(eps_grid, counts):
        f = c * (1.0 + 8.0 * log_n / (e * T[pos]))
        better = f < best_f[pos]
        idx = np.flatnonzero(pos)[better]
        best_f[idx] = f[better]
        best_eps[idx] = e
    return best_f, best_eps
