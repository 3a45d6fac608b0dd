import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oecm.errors import DomainError
from oecm.hamiltonian import (
    DEFAULT_G,
    DEFAULT_H,
    SpectralStatistics,
    SpinChainSpec,
    build_ising,
    diagonalize,
    epsilon_grid,
    gap_count,
    minimal_spectral_factor,
    spectral_factor,
    spectral_statistics,
)


def hand_assembled(n, g, h, j):
    """H from spin configurations directly: bit k (MSB = site 1) set means spin down."""
    d = 2**n
    ham = np.zeros((d, d))
    for idx in range(d):
        z = [1 - 2 * ((idx >> (n - site)) & 1) for site in range(1, n + 1)]
        ham[idx, idx] = (
            h * sum(z[1:-1]) + j * sum(z[k] * z[k + 1] for k in range(n - 1)) + (h - j) * (z[0] + z[-1])
        )
        for site in range(1, n + 1):
            ham[idx ^ (1 << (n - site)), idx] += g
    return ham


def stats_from(gaps, n_levels=3):
    gaps = np.asarray(gaps, dtype=float)
    return SpectralStatistics(n_levels=n_levels, distinct_gaps=gaps, gap_tolerance=0.0, n_pair_gaps=len(gaps))


def test_two_site_ising_diagonal():
    # Z1 Z2 - (Z1 + Z2) on |uu>, |ud>, |du>, |dd>: 1 - 2, -1 - 0, -1 - 0, 1 + 2
    ham = build_ising(SpinChainSpec(2, g=0, h=0, j=1))
    np.testing.assert_array_equal(ham, np.diag([-1.0, -1.0, -1.0, 3.0]))


def test_two_site_transverse_only():
    ham = build_ising(SpinChainSpec(2, g=1, h=0, j=0))
    assert np.trace(ham) == 0
    assert np.all(np.diag(ham) == 0)
    assert ham.sum() == 8


def test_spec_rejects_short_chain():
    with pytest.raises(DomainError):
        SpinChainSpec(1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_matches_hand_assembled_oracle(n):
    spec = SpinChainSpec(n)
    ham = build_ising(spec)
    oracle = hand_assembled(n, spec.g, spec.h, spec.j)
    np.testing.assert_allclose(ham, oracle, atol=1e-14)
    np.testing.assert_allclose(np.linalg.eigvalsh(ham), np.linalg.eigvalsh(oracle), atol=1e-12)


@given(st.integers(2, 5), st.floats(-2, 2), st.floats(-2, 2), st.floats(-2, 2))
def test_traceless_and_symmetric(n, g, h, j):
    ham = build_ising(SpinChainSpec(n, g, h, j))
    assert abs(np.trace(ham)) < 1e-9
    np.testing.assert_array_equal(ham, ham.T)


def test_default_parameters():
    assert DEFAULT_G == pytest.approx((5 + math.sqrt(5)) / 8)
    assert DEFAULT_H == pytest.approx((1 + math.sqrt(5)) / 4)


def test_diagonalize_groups_degenerate_levels():
    d = diagonalize(np.diag([1.0, 1.0, 2.0]))
    np.testing.assert_allclose(d.energies, [1, 2])
    np.testing.assert_array_equal(d.degeneracies, [2, 1])
    ident = diagonalize(np.eye(4))
    assert ident.n_levels == 1 and ident.degeneracies[0] == 4
    np.testing.assert_allclose(ident.projector(0), np.eye(4), atol=1e-14)


def test_diagonalize_rejects_non_hermitian():
    with pytest.raises(DomainError):
        diagonalize(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(DomainError):
        diagonalize(np.eye(2), grouping_tol=0)


def test_decomposition_invariants(chain3):
    _, ham, d = chain3
    assert d.degeneracies.sum() == d.dim
    v = d.eigenvectors
    assert np.max(np.abs(v.conj().T @ v - np.eye(d.dim))) < 1e-10
    assert np.max(np.abs(ham - d.reconstruct())) < 1e-9 * d.spectral_range
    assert np.all(np.diff(d.energies) > 0)


def test_default_hamiltonian_is_nondegenerate(decomp10):
    raw = decomp10.raw_eigenvalues
    assert decomp10.n_levels == 1024
    assert np.min(np.diff(raw)) > 1e-10 * decomp10.spectral_range


def test_gap_count_examples():
    assert gap_count(stats_from([1.0, 2.0, 3.0]), 0.5) == 1
    assert gap_count(stats_from([1.0, 1.2, 3.0]), 0.3) == 2
    with pytest.raises(DomainError):
        gap_count(stats_from([1.0]), 0.0)


def test_gap_count_single_level_warns():
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        assert gap_count(stats_from([], n_levels=1), 0.1) == 0
    assert any(issubclass(w.category, RuntimeWarning) for w in caught)


@given(st.lists(st.floats(0.01, 10), min_size=1, max_size=40), st.floats(1e-3, 3), st.floats(1e-3, 3))
def test_gap_count_monotone(gaps, e1, e2):
    s = stats_from(sorted(set(gaps)))
    lo, hi = sorted((e1, e2))
    assert 1 <= gap_count(s, lo) <= gap_count(s, hi)


def test_statistics_brute_force(chain3):
    _, _, d = chain3
    stats = spectral_statistics(d)
    e = d.energies
    pairs = sorted(e[a] - e[b] for a in range(len(e)) for b in range(a))
    assert stats.n_pair_gaps == len(pairs) == 28
    distinct = [pairs[0]]
    for g in pairs[1:]:
        if g - distinct[-1] >= stats.gap_tolerance:
            distinct.append(g)
    assert len(stats.distinct_gaps) == len(distinct)
    assert np.all(np.diff(stats.distinct_gaps) > stats.gap_tolerance)


def test_spectral_factor_examples():
    two = stats_from([1.0], n_levels=2)
    assert spectral_factor(two, 0.5, 16.0) == pytest.approx(2.0)
    # N(0.1) = 3 with n = 1024 levels
    three = stats_from([1.0, 1.05, 1.1], n_levels=1024)
    assert spectral_factor(three, 0.1, 8000.0) == pytest.approx(3.3)
    with pytest.raises(DomainError):
        spectral_factor(three, 0.1, 0.0)
    with pytest.raises(DomainError):
        spectral_factor(three, -1.0, 1.0)


@given(st.floats(0.01, 1e4), st.floats(0.01, 1e4))
def test_spectral_factor_decreases_towards_gap_count(t1, t2):
    s = stats_from([1.0, 1.05, 1.1, 2.0], n_levels=5)
    lo, hi = sorted((t1, t2))
    f_lo, f_hi = spectral_factor(s, 0.1, lo), spectral_factor(s, 0.1, hi)
    assert f_hi <= f_lo
    assert f_hi >= gap_count(s, 0.1)


def test_minimal_spectral_factor_is_grid_minimum(chain3):
    stats = spectral_statistics(chain3[2])
    T = np.array([0.0, 1.0, 50.0, 1e4])
    f, eps = minimal_spectral_factor(stats, T)
    assert f[0] == np.inf
    grid = epsilon_grid(stats)
    for k in range(1, 4):
        assert f[k] == pytest.approx(min(spectral_factor(stats, e, T[k]) for e in grid))
        assert f[k] == pytest.approx(spectral_factor(stats, eps[k], T[k]))
