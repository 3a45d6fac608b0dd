"""Observable entropy, the equilibration complexity C(p) and its bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dynamics import running_average
from .errors import DomainError


def _check_base(base: float) -> float:
    base = float(base)
    if not base > 1.0:
        raise DomainError(f"logarithm base must exceed 1, got {base!r}")
    return base


def shannon_entropy(p, base: float = math.e):
    """-sum p log_base p with 0 log 0 = 0; accepts one vector or rows of vectors."""
    base = _check_base(base)
    p = np.asarray(p, dtype=float)
    rows = np.ascontiguousarray(p.reshape(-1, p.shape[-1]))
    h = _kernels.entropy_rows(rows) / math.log(base)
    h = np.maximum(h, 0.0).reshape(p.shape[:-1])
    return float(h) if h.ndim == 0 else h


def l1_distance(p, q):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape[-1] != q.shape[-1]:
        raise DomainError(f"length mismatch: {p.shape[-1]} vs {q.shape[-1]}")
    dist = np.sum(np.abs(p - q), axis=-1)
    return float(dist) if np.ndim(dist) == 0 else dist


def classical_complexity(p, base: float = math.e):
    """Entropy times squared Euclidean distance to the uniform distribution."""
    p = np.asarray(p, dtype=float)
    r = p.shape[-1]
    disequilibrium = np.sum((p - 1.0 / r) ** 2, axis=-1)
    c = shannon_entropy(p, base) * disequilibrium
    return float(c) if np.ndim(c) == 0 else c


def oecm(p, p_inf, base: float = math.e):
    """C(p) = H(p) ||p - p_inf||_1."""
    c = shannon_entropy(p, base) * l1_distance(p, p_inf)
    return float(c) if np.ndim(c) == 0 else c


@dataclass(frozen=True)
class ComplexityRecord:
    """Per-time entropy, distance to equilibrium and complexity (arrays over ``time``)."""

    time: np.ndarray
    entropy: np.ndarray
    l1_to_equilibrium: np.ndarray
    oecm: np.ndarray

    @classmethod
    def from_probabilities(cls, times, probs, p_inf, base: float = math.e) -> "ComplexityRecord":
        times = np.asarray(times, dtype=float)
        entropy = np.atleast_1d(shannon_entropy(probs, base))
        dist = np.atleast_1d(l1_distance(probs, p_inf))
        return cls(time=times, entropy=entropy, l1_to_equilibrium=dist, oecm=entropy * dist)


def mean_oecm_series(records: ComplexityRecord, times=None) -> np.ndarray:
    """<C(p_t)>_T at every grid T."""
    times = records.time if times is None else times
    return running_average(records.oecm, times)


def oecm_of_mean_series(mean_probs, p_inf, base: float = math.e) -> np.ndarray:
    """C(<p_t>_T) given the running vector average <p_t>_T (rows over T)."""
    return np.atleast_1d(oecm(mean_probs, p_inf, base))


def theorem1_bound(r: int, d_eff, f, base: float = math.e):
    """(log_base r / 2) sqrt(r f / d_eff); f = 1 gives the asymptotic form."""
    base = _check_base(base)
    if r < 1:
        raise DomainError("rank must be at least 1")
    d_eff = np.asarray(d_eff, dtype=float)
    f = np.asarray(f, dtype=float)
    if np.any(d_eff < 1.0 - 1e-12):
        raise DomainError("effective dimension must be at least 1")
    if np.any(~(f > 0)):
        raise DomainError("spectral factor must be positive")
    # math.log(1) is exactly 0, so r = 1 stays 0 even when f is infinite
    if r == 1:
        bound = np.zeros(np.broadcast(d_eff, f).shape)
    else:
        bound = 0.5 * math.log(r, base) * np.sqrt(r * f / d_eff)
    return float(bound) if bound.ndim == 0 else bound


def asymptotic_bound(r: int, d_eff, base: float = math.e):
    return theorem1_bound(r, d_eff, 1.0, base)


@dataclass(frozen=True)
class BoundReport:
    """Both time-averaged complexities against the full and asymptotic bounds, per T."""

    T: np.ndarray
    mean_oecm: np.ndarray
    oecm_of_mean: np.ndarray
    theorem1_bound: np.ndarray
    asymptotic_bound: float
    epsilon_used: np.ndarray

    def mean_holds(self, slack: float = 1e-12) -> bool:
        return bool(np.all(self.mean_oecm <= self.theorem1_bound + slack))

    def of_mean_holds(self, slack: float = 1e-12) -> bool:
        return bool(np.all(self.oecm_of_mean <= self.theorem1_bound + slack))


def bound_report(records: ComplexityRecord, mean_probs, p_inf, r, d_eff, f, epsilon, base) -> BoundReport:
    T = records.time
    return BoundReport(
        T=T,
        mean_oecm=mean_oecm_series(records),
        oecm_of_mean=oecm_of_mean_series(mean_probs, p_inf, base),
        theorem1_bound=theorem1_bound(r, d_eff, f, base),
        asymptotic_bound=asymptotic_bound(r, d_eff, base),
        epsilon_used=np.broadcast_to(np.asarray(epsilon, dtype=float), T.shape).copy(),
    )
