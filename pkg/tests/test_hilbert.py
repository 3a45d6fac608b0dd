import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oecm.errors import DomainError
from oecm.hilbert import PureState, basis_index, down_counts, embed_single_site, is_hermitian, pauli, product_state


def test_pauli_matrices():
    np.testing.assert_array_equal(pauli("z"), np.diag([1.0, -1.0]))
    np.testing.assert_array_equal(pauli("x"), [[0, 1], [1, 0]])
    np.testing.assert_array_equal(pauli("y"), [[0, -1j], [1j, 0]])
    for axis in "xyz":
        s = pauli(axis)
        assert is_hermitian(s)
        assert np.trace(s) == 0
        np.testing.assert_allclose(s @ s, np.eye(2))


def test_pauli_algebra():
    x, y, z = (pauli(a) for a in "xyz")
    np.testing.assert_allclose(x @ y - y @ x, 2j * z)
    np.testing.assert_allclose(y @ z - z @ y, 2j * x)


def test_pauli_rejects_unknown_axis():
    with pytest.raises(DomainError):
        pauli("w")


def test_embed_examples():
    np.testing.assert_array_equal(embed_single_site(pauli("z"), 1, 1), pauli("z"))
    np.testing.assert_array_equal(embed_single_site(pauli("z"), 1, 2), np.diag([1, 1, -1, -1]))
    up_up = np.array([1, 0, 0, 0])
    up_down = np.array([0, 1, 0, 0])
    # sigma_x on site 2 of a 2-site chain, written out by hand
    by_hand = np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    np.testing.assert_array_equal(embed_single_site(pauli("x"), 2, 2), by_hand)
    np.testing.assert_array_equal(embed_single_site(pauli("x"), 2, 2) @ up_up, up_down)


@pytest.mark.parametrize("site", [0, 4, -1])
def test_embed_site_out_of_range(site):
    with pytest.raises(DomainError, match=str(site)):
        embed_single_site(pauli("z"), site, 3)


def _random_hermitian(rng):
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    return a + a.conj().T


@given(st.integers(2, 4), st.data())
def test_embeddings_on_distinct_sites_commute(n, data):
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(1, n).filter(lambda k: k != i))
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    a, b = _random_hermitian(rng), _random_hermitian(rng)
    ea, eb = embed_single_site(a, i, n), embed_single_site(b, j, n)
    assert np.max(np.abs(ea @ eb - eb @ ea)) < 1e-12
    assert is_hermitian(ea)
    assert np.linalg.norm(ea, 2) == pytest.approx(np.linalg.norm(a, 2), rel=1e-12)


def test_product_states():
    assert product_state("up", 2).amplitudes[basis_index([0, 0])] == 1
    assert product_state("Dw", 3).amplitudes[basis_index([1, 1, 1])] == 1
    pm = product_state("pm", 4).amplitudes
    assert pm[basis_index([0, 1, 0, 1])] == 1
    assert basis_index([0, 1, 0, 1]) == 0b0101
    for pattern in ("up", "dw", "pm"):
        amps = product_state(pattern, 5).amplitudes
        assert np.sum(amps == 1) == 1 and np.sum(amps != 0) == 1
        assert np.linalg.norm(amps) == 1.0


def test_pure_state_contract():
    with pytest.raises(DomainError):
        PureState(np.array([1.0, 1.0]))
    psi = PureState(np.array([0, 1, 0, 0]))
    assert psi.n_sites == 2
    assert not psi.amplitudes.flags.writeable
    with pytest.raises(DomainError):
        PureState(np.ones(3) / np.sqrt(3)).n_sites


def test_down_counts():
    np.testing.assert_array_equal(down_counts(2), [0, 1, 1, 2])
