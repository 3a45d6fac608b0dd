"""Unitary evolution in the energy eigenbasis, dephasing and time averages.

Expectation values are always computed from amplitudes; the density
matrix rho_t is never formed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DomainError
from .hamiltonian import SpectralDecomposition
from .hilbert import PureState
from .observables import ObservableDecomposition, clean_probabilities

DEFAULT_DT = 0.05
DEFAULT_T_MAX = 1000.0
# time samples evolved per BLAS call
CHUNK = 2048


@dataclass(frozen=True)
class EnergyBasisState:
    overlaps: np.ndarray
    decomposition: SpectralDecomposition = field(repr=False)

    @property
    def weights(self) -> np.ndarray:
        return np.abs(self.overlaps) ** 2


@dataclass(frozen=True)
class EquilibriumState:
    """Dephased initial state: one d_i x d_i block per energy level."""

    populations: np.ndarray
    blocks: tuple = field(repr=False)
    decomposition: SpectralDecomposition = field(repr=False)

    def block_matrix(self) -> np.ndarray:
        """Dense omega in the energy eigenbasis."""
        d = self.decomposition.dim
        out = np.zeros((d, d), dtype=complex)
        offs = self.decomposition.level_offsets
        for i, blk in enumerate(self.blocks):
            out[offs[i] : offs[i + 1], offs[i] : offs[i + 1]] = blk
        return out

    def purity(self) -> float:
        return float(sum(np.sum(np.abs(b) ** 2) for b in self.blocks))


@dataclass(frozen=True)
class TimeGrid:
    times: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise DomainError("a time grid needs at least two points")
        if t[0] != 0.0 or np.any(np.diff(t) <= 0):
            raise DomainError("time grid must start at 0 and increase strictly")
        t.setflags(write=False)
        object.__setattr__(self, "times", t)

    @classmethod
    def uniform(cls, t_max: float = DEFAULT_T_MAX, dt: float = DEFAULT_DT) -> "TimeGrid":
        """Uniform grid on [0, t_max]; the step is never larger than ``dt``."""
        if not (t_max > 0 and dt > 0):
            raise DomainError("t_max and dt must be positive")
        steps = max(1, int(np.ceil(t_max / dt - 1e-9)))
        return cls(np.linspace(0.0, t_max, steps + 1))

    def __len__(self):
        return self.times.shape[0]


def _amplitudes(psi) -> np.ndarray:
    if isinstance(psi, PureState):
        return psi.amplitudes
    return np.asarray(psi, dtype=complex)


def prepare(decomp: SpectralDecomposition, psi0) -> EnergyBasisState:
    amps = _amplitudes(psi0)
    if amps.shape[0] != decomp.dim:
        raise DomainError(f"state dimension {amps.shape[0]} != Hamiltonian dimension {decomp.dim}")
    return EnergyBasisState(decomp.eigenvectors.conj().T @ amps, decomp)


def evolve_amplitudes(state: EnergyBasisState, times) -> np.ndarray:
    """Computational-basis amplitudes at each time, shape (len(times), d)."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    d = state.decomposition
    phases = np.exp(-1j * np.outer(times, d.raw_eigenvalues)) * state.overlaps
    return phases @ d.eigenvectors.T


def evolve(state: EnergyBasisState, t: float) -> PureState:
    """e^{-iHt} psi0, using the raw eigenvalue of every eigenvector column."""
    amps = evolve_amplitudes(state, [t])[0]
    # unitarity holds to round-off; strip the residue so PureState accepts it
    return PureState(amps / np.linalg.norm(amps))


def probability_series(state: EnergyBasisState, obs: ObservableDecomposition, times) -> np.ndarray:
    """p_t on every grid point, shape (len(times), r), evolved in chunks."""
    times = np.asarray(times, dtype=float)
    out = np.empty((times.shape[0], obs.rank))
    for start in range(0, times.shape[0], CHUNK):
        stop = start + CHUNK
        out[start:stop] = obs.probabilities(evolve_amplitudes(state, times[start:stop]))
    return out


def dephase(decomp: SpectralDecomposition, psi0) -> EquilibriumState:
    """omega = sum_i Pi_i rho_0 Pi_i for a pure initial state."""
    c = prepare(decomp, psi0).overlaps
    offs = decomp.level_offsets
    blocks = tuple(
        np.outer(c[offs[i] : offs[i + 1]], c[offs[i] : offs[i + 1]].conj()) for i in range(decomp.n_levels)
    )
    pops = np.add.reduceat(np.abs(c) ** 2, offs[:-1])
    return EquilibriumState(populations=pops, blocks=blocks, decomposition=decomp)


def effective_dimension(decomp: SpectralDecomposition, psi0) -> float:
    """(sum_i tr(Pi_i rho_0)^2)^-1."""
    c = prepare(decomp, psi0).overlaps
    pops = np.add.reduceat(np.abs(c) ** 2, decomp.level_offsets[:-1])
    return float(1.0 / np.sum(pops**2))


def running_average(values, times) -> np.ndarray:
    """<g>_T at every grid T by the trapezoid rule; the T = 0 row is g(0)."""
    values = np.asarray(values, dtype=float)
    times = np.asarray(times, dtype=float)
    if values.shape[0] != times.shape[0]:
        raise DomainError("series and time grid have different lengths")
    cum = _kernels.cumulative_trapezoid(values, times)
    out = np.empty(values.shape)
    out[0] = values[0]
    out[1:] = cum[1:] / times[1:].reshape((-1,) + (1,) * (values.ndim - 1))
    return out


def time_average(values, times, T: float):
    """(1/T) int_0^T g dt, linearly interpolating the cumulative integral off-grid."""
    values = np.asarray(values, dtype=float)
    times = np.asarray(times, dtype=float)
    if not times[0] <= T <= times[-1]:
        raise DomainError(f"T={T!r} outside the grid span [{times[0]}, {times[-1]}]")
    if T == times[0]:
        return values[0].copy() if values.ndim > 1 else float(values[0])
    cum = _kernels.cumulative_trapezoid(values, times)
    k = min(int(np.searchsorted(times, T, side="right")) - 1, times.shape[0] - 2)
    w = (T - times[k]) / (times[k + 1] - times[k])
    result = ((1.0 - w) * cum[k] + w * cum[k + 1]) / T
    return float(result) if np.ndim(result) == 0 else result


def averaging_kernel(energies, T: float) -> np.ndarray:
    """K_jk = (1/T) int_0^T e^{i (E_j - E_k) t} dt = (e^{i x} - 1)/(i x), x = (E_j - E_k) T."""
    if not T > 0:
        raise DomainError("averaging time T must be positive")
    x = np.subtract.outer(energies, energies) * T
    return np.exp(0.5j * x) * np.sinc(x / (2.0 * np.pi))


def _stacked_rows(obs: ObservableDecomposition, eigenvectors):
    rows = obs.energy_rows(eigenvectors)
    labels = np.repeat(np.arange(obs.rank), [w.shape[0] for w in rows])
    return np.vstack(rows), labels


def exact_time_averaged_probabilities(state: EnergyBasisState, obs: ObservableDecomposition, T: float) -> np.ndarray:
    """Closed-form <p_l>_T from the double sum over eigenvector pairs."""
    d = state.decomposition
    kern = averaging_kernel(d.raw_eigenvalues, T)
    rows, labels = _stacked_rows(obs, d.eigenvectors)
    b = rows * state.overlaps
    per_row = np.real(np.sum(b.conj() * (b @ kern.T), axis=1))
    return clean_probabilities(np.bincount(labels, weights=per_row, minlength=obs.rank))


def averaged_probability_operators(decomp: SpectralDecomposition, obs: ObservableDecomposition, T: float) -> np.ndarray:
    """A_l with <p_l>_T = c^dagger A_l c for energy-basis coefficients c; shape (r, d, d).

    Worth it when many initial states share one (H, O, T).
    """
    kern = averaging_kernel(decomp.raw_eigenvalues, T)
    ops = np.empty((obs.rank, decomp.dim, decomp.dim), dtype=complex)
    for l, w in enumerate(obs.energy_rows(decomp.eigenvectors)):
        ops[l] = (w.conj().T @ w) * kern
    return ops
