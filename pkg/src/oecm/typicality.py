"""Haar-random initial states and a Monte Carlo check of the deviation bound.

Seed contract: sample ``i`` of an experiment seeded with ``seed`` draws from
``numpy.random.default_rng(SeedSequence(seed, spawn_key=(i,)))`` (PCG64).
A state sampled with an integer seed uses ``default_rng(seed)`` directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dynamics import TimeGrid, averaged_probability_operators
from .errors import DomainError
from .hamiltonian import SpectralDecomposition, minimal_spectral_factor, spectral_factor, spectral_statistics
from .hilbert import PureState
from .observables import ObservableDecomposition, clean_probabilities

CONVENTIONS = ("ensemble_mean", "per_sample_min")


def sample_seed(seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(index,))


def haar_random_state(d: int, rng_seed) -> PureState:
    """Normalized vector of d i.i.d. standard complex Gaussians."""
    if d < 1:
        raise DomainError(f"dimension must be at least 1, got {d}")
    rng = np.random.default_rng(rng_seed)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(z / np.linalg.norm(z))


@dataclass(frozen=True)
class DeviationSample:
    seed_index: int
    d_eff: float
    l2_deviation: float
    jensen_holds: bool


@dataclass(frozen=True)
class TypicalityReport:
    T: float
    epsilon_dev: float
    n_samples: int
    rank: int
    f_value: float
    empirical_frequency: float
    d_eff_mean: float
    d_eff_min: float
    mean_sq_deviation: float
    d_eff_convention: str = "ensemble_mean"
    gaps_nondegenerate: bool = True
    samples: tuple = field(default=(), repr=False)

    def markov_bound_for(self, convention: str) -> float:
        d_eff = self.d_eff_mean if convention == "ensemble_mean" else self.d_eff_min
        return self.rank * self.f_value / (d_eff * self.epsilon_dev**2)

    @property
    def markov_bound(self) -> float:
        return self.markov_bound_for(self.d_eff_convention)

    @property
    def vacuous(self) -> bool:
        return self.markov_bound >= 1.0

    @property
    def allowance(self) -> float:
        """Three binomial standard deviations at the bound's own rate."""
        q = min(self.markov_bound, 1.0)
        return 3.0 * math.sqrt(q * (1.0 - q) / self.n_samples)

    @property
    def violated(self) -> bool:
        return self.empirical_frequency > self.markov_bound + self.allowance

    @property
    def mean_bound(self) -> float:
        """r f / d_eff, the bound on the sample mean of the squared 2-norm deviation."""
        return self.rank * self.f_value / self.d_eff_mean

    @property
    def mean_bound_allowance(self) -> float:
        sq = np.array([s.l2_deviation**2 for s in self.samples])
        return 3.0 * float(sq.std(ddof=1)) / math.sqrt(len(sq)) if len(sq) > 1 else 0.0

    @property
    def mean_bound_holds(self) -> bool:
        return self.mean_sq_deviation <= self.mean_bound + self.mean_bound_allowance

    @property
    def jensen_holds(self) -> bool:
        return all(s.jensen_holds for s in self.samples)


def _grid_second_moments(decomp, obs, coeffs, p_inf, times):
    """<(p_l(t) - p_l^inf)^2>_T on ``times`` for every sample (columns of coeffs)."""
    vecs = decomp.eigenvectors
    e = decomp.raw_eigenvalues
    steps = np.diff(times)
    quad = np.zeros(times.shape[0])
    quad[:-1] += 0.5 * steps
    quad[1:] += 0.5 * steps
    acc = np.zeros((coeffs.shape[1], obs.rank))
    for t, w in zip(times, quad):
        amps = vecs @ (np.exp(-1j * e * t)[:, None] * coeffs)
        acc += w * (obs.probabilities(amps.T) - p_inf) ** 2
    return acc / times[-1]


def deviation_experiment(
    decomp: SpectralDecomposition,
    obs: ObservableDecomposition,
    T: float,
    epsilon_dev: float,
    n_samples: int,
    seed: int = 0,
    epsilon: float | str | None = None,
    d_eff_convention: str = "ensemble_mean",
    jensen_dt: float = 0.05,
    jensen_tol: float = 1e-8,
) -> TypicalityReport:
    """Sample Haar states and count ||<p_t>_T - p_inf||_2 >= epsilon_dev.

    ``epsilon=None`` substitutes f = 1 (the large-T form); ``"auto"`` takes
    the minimum of f(eps, T) over the standard epsilon grid; a number fixes eps.
    The per-component squared deviation is also averaged on a time grid of
    step ``jensen_dt`` to check (<p_l>_T - p_l^inf)^2 <= <(p_l - p_l^inf)^2>_T.
    """
    if not (T > 0 and epsilon_dev > 0 and n_samples >= 1):
        raise DomainError("need T > 0, epsilon_dev > 0 and n_samples >= 1")
    if d_eff_convention not in CONVENTIONS:
        raise DomainError(f"unknown d_eff convention {d_eff_convention!r}")
    stats = spectral_statistics(decomp)
    if epsilon is None or obs.rank == 1:
        f_value = 1.0
    elif epsilon == "auto":
        f_value = float(minimal_spectral_factor(stats, [T])[0][0])
    else:
        f_value = spectral_factor(stats, float(epsilon), T)

    states = [haar_random_state(decomp.dim, sample_seed(seed, i)) for i in range(n_samples)]
    coeffs = decomp.eigenvectors.conj().T @ np.stack([s.amplitudes for s in states], axis=1)
    weights = np.abs(coeffs) ** 2
    pops = np.add.reduceat(weights, decomp.level_offsets[:-1], axis=0)
    d_eff = 1.0 / np.sum(pops**2, axis=0)

    ops = averaged_probability_operators(decomp, obs, T)
    mean_p = clean_probabilities(np.real(np.einsum("jn,ljk,kn->nl", coeffs.conj(), ops, coeffs)))
    rows = obs.energy_rows(decomp.eigenvectors)
    if decomp.nondegenerate:
        p_inf = np.stack([(np.abs(w) ** 2).sum(axis=0) @ weights for w in rows], axis=1)
    else:
        p_inf = np.empty((n_samples, obs.rank))
        for l, w in enumerate(rows):
            proj = np.add.reduceat(w[:, :, None] * coeffs[None, :, :], decomp.level_offsets[:-1], axis=1)
            p_inf[:, l] = np.sum(np.abs(proj) ** 2, axis=(0, 1))
    p_inf = clean_probabilities(p_inf)

    dev = mean_p - p_inf
    l2 = np.sqrt(np.sum(dev**2, axis=1))
    grid = TimeGrid.uniform(T, jensen_dt).times
    second = _grid_second_moments(decomp, obs, coeffs, p_inf, grid)
    jensen = np.all(dev**2 <= second + jensen_tol, axis=1)

    samples = tuple(
        DeviationSample(seed_index=i, d_eff=float(d_eff[i]), l2_deviation=float(l2[i]), jensen_holds=bool(jensen[i]))
        for i in range(n_samples)
    )
    return TypicalityReport(
        T=float(T),
        epsilon_dev=float(epsilon_dev),
        n_samples=n_samples,
        rank=obs.rank,
        f_value=f_value,
        empirical_frequency=float(np.mean(l2 >= epsilon_dev)),
        d_eff_mean=float(d_eff.mean()),
        d_eff_min=float(d_eff.min()),
        mean_sq_deviation=float(np.mean(l2**2)),
        d_eff_convention=d_eff_convention,
        gaps_nondegenerate=stats.gaps_nondegenerate,
        samples=samples,
    )
