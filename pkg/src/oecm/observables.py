"""Observables as outcome/projector decompositions and their statistics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError, NumericalError
from .hamiltonian import GROUPING_TOL, group_sorted
from .hilbert import down_counts, is_hermitian

NEG_TOL = 1e-12
SUM_TOL = 1e-10
# a larger defect than this is a bug upstream, not round-off
SUM_FAIL = 1e-8


@dataclass(frozen=True)
class ObservableDecomposition:
    """O = sum_l o_l P_l.

    Diagonal observables (in the computational basis) carry ``labels``: the
    outcome index of every basis state. General ones carry ``columns``: an
    orthonormal d x rank_l block spanning each P_l.
    """

    outcomes: np.ndarray
    ranks: np.ndarray
    labels: np.ndarray | None = None
    columns: tuple | None = field(default=None, repr=False)

    @property
    def rank(self) -> int:
        return self.outcomes.shape[0]

    @property
    def dim(self) -> int:
        return int(self.ranks.sum())

    @property
    def operator_norm(self) -> float:
        return float(np.max(np.abs(self.outcomes)))

    @property
    def diagonal(self) -> bool:
        return self.labels is not None

    def energy_rows(self, eigenvectors) -> list:
        """Per outcome, the rank_l x d matrix Q_l^dagger V."""
        if self.diagonal:
            return [eigenvectors[self.labels == l] for l in range(self.rank)]
        return [q.conj().T @ eigenvectors for q in self.columns]

    def projector(self, l: int) -> np.ndarray:
        if self.diagonal:
            return np.diag((self.labels == l).astype(float))
        q = self.columns[l]
        return q @ q.conj().T

    def matrix(self) -> np.ndarray:
        return sum(o * self.projector(l) for l, o in enumerate(self.outcomes))

    def probabilities(self, amplitudes) -> np.ndarray:
        """||P_l psi||^2 for one state (d,) or a batch (..., d)."""
        amps = np.asarray(amplitudes)
        if amps.shape[-1] != self.dim:
            raise DomainError(f"state dimension {amps.shape[-1]} != observable dimension {self.dim}")
        flat = amps.reshape(-1, self.dim)
        if self.diagonal:
            weights = np.ascontiguousarray(flat.real**2 + flat.imag**2)
            probs = _kernels.label_sums(weights, self.labels, self.rank)
        else:
            probs = np.stack(
                [np.sum(np.abs(flat @ q.conj()) ** 2, axis=1) for q in self.columns], axis=1
            )
        return clean_probabilities(probs.reshape(amps.shape[:-1] + (self.rank,)))


def clean_probabilities(probs) -> np.ndarray:
    """Clamp round-off negatives; renormalize only a measurable sum defect."""
    p = np.array(probs, dtype=float)
    if np.any(p < -NEG_TOL):
        raise NumericalError(f"probability below -{NEG_TOL}: {p.min()!r}")
    p[p < 0] = 0.0
    total = p.sum(axis=-1, keepdims=True)
    defect = np.abs(total - 1.0)
    if np.any(defect > SUM_FAIL):
        raise NumericalError(f"probabilities sum to {total.ravel()[np.argmax(defect)]!r}")
    if np.any(defect > SUM_TOL):
        p = p / total
    return p


def magnetization_observable(n_sites: int) -> ObservableDecomposition:
    """(1/N) sum_i sigma_z^(i); outcome (N - 2k)/N collects states with k down spins."""
    if n_sites < 1:
        raise DomainError("n_sites must be at least 1")
    k_down = down_counts(n_sites)
    # outcomes ascending, so label l = N - k
    labels = (n_sites - k_down).astype(np.int64)
    outcomes = (2.0 * np.arange(n_sites + 1) - n_sites) / n_sites
    ranks = np.bincount(labels, minlength=n_sites + 1)
    return ObservableDecomposition(outcomes=outcomes, ranks=ranks, labels=labels)


def decompose_observable(op, grouping_tol: float = GROUPING_TOL) -> ObservableDecomposition:
    """General dense path; groups eigenvalues exactly like the Hamiltonian's."""
    op = np.asarray(op)
    if not is_hermitian(op, tol=1e-12 * max(1.0, float(np.max(np.abs(op), initial=0.0)))):
        raise DomainError("observable is not Hermitian")
    vals, vecs = np.linalg.eigh(op)
    outcomes, offsets = group_sorted(vals, grouping_tol)
    columns = tuple(vecs[:, offsets[i] : offsets[i + 1]] for i in range(outcomes.shape[0]))
    return ObservableDecomposition(outcomes=outcomes, ranks=np.diff(offsets), columns=columns)


def outcome_probabilities(obs: ObservableDecomposition, psi) -> np.ndarray:
    return obs.probabilities(psi.amplitudes if hasattr(psi, "amplitudes") else psi)


def equilibrium_probabilities(obs: ObservableDecomposition, omega) -> np.ndarray:
    """tr(P_l omega), evaluated in the energy eigenbasis of ``omega``."""
    decomp = omega.decomposition
    if decomp.dim != obs.dim:
        raise DomainError(f"equilibrium state dimension {decomp.dim} != observable dimension {obs.dim}")
    rows = obs.energy_rows(decomp.eigenvectors)
    probs = np.zeros(obs.rank)
    if decomp.nondegenerate:
        pops = omega.populations
        for l, w in enumerate(rows):
            probs[l] = np.sum(np.abs(w) ** 2 @ pops)
    else:
        offs = decomp.level_offsets
        for l, w in enumerate(rows):
            acc = 0.0
            for i, blk in enumerate(omega.blocks):
                wi = w[:, offs[i] : offs[i + 1]]
                acc += np.real(np.sum((wi @ blk) * wi.conj()))
            probs[l] = acc
    return clean_probabilities(probs)


def expectation(obs: ObservableDecomposition, p) -> np.ndarray:
    """sum_l o_l p_l; accepts a batch of probability rows."""
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != obs.rank:
        raise DomainError(f"probability length {p.shape[-1]} != rank {obs.rank}")
    val = p @ obs.outcomes
    return float(val) if np.ndim(val) == 0 else val
