import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oecm.complexity import (
    ComplexityRecord,
    asymptotic_bound,
    bound_report,
    classical_complexity,
    l1_distance,
    mean_oecm_series,
    oecm,
    oecm_of_mean_series,
    shannon_entropy,
    theorem1_bound,
)
from oecm.errors import DomainError


@st.composite
def distributions(draw, min_size=2, max_size=12):
    r = draw(st.integers(min_size, max_size))
    w = draw(arrays(np.float64, r, elements=st.floats(0, 1)))
    assume(w.sum() > 1e-6)
    return w / w.sum()


def test_entropy_examples():
    assert shannon_entropy([0, 1, 0]) == 0.0
    assert shannon_entropy(np.ones(11) / 11, base=11) == pytest.approx(1.0)
    assert shannon_entropy([0.5, 0.5, 0.0], base=2) == pytest.approx(1.0)
    with pytest.raises(DomainError):
        shannon_entropy([0.5, 0.5], base=1.0)


def test_l1_examples():
    assert l1_distance([0.3, 0.7], [0.3, 0.7]) == 0.0
    assert l1_distance([1, 0], [0, 1]) == 2.0
    assert l1_distance([0.6, 0.4], [0.5, 0.5]) == pytest.approx(0.2)
    with pytest.raises(DomainError):
        l1_distance([1.0], [0.5, 0.5])


def test_classical_complexity_examples():
    assert classical_complexity(np.ones(4) / 4) == pytest.approx(0.0, abs=1e-16)
    assert classical_complexity([1.0, 0.0, 0.0]) == 0.0
    # H2(3/4, 1/4) = 0.8112781244591328, D = 2 (1/4)^2 = 0.125
    assert classical_complexity([0.75, 0.25], base=2) == pytest.approx(0.1014097655573916, rel=1e-12)


def test_oecm_examples():
    assert oecm([0, 0, 1], [0.2, 0.3, 0.5]) == 0.0
    assert oecm([0.2, 0.3, 0.5], [0.2, 0.3, 0.5]) == 0.0
    p, q = np.array([0.5, 0.5]), np.array([0.9, 0.1])
    assert oecm(p, q, base=2) == pytest.approx(1.0 * 0.8)


def test_theorem1_bound_examples():
    assert theorem1_bound(1, 3.0, 10.0) == 0.0
    assert theorem1_bound(11, 2.95, 1.0) == pytest.approx(2.315184202731172, rel=1e-12)
    assert theorem1_bound(11, 93.74, 1.0) == pytest.approx(0.41070887143565016, rel=1e-12)
    assert asymptotic_bound(11, 2.95) == theorem1_bound(11, 2.95, 1.0)
    assert theorem1_bound(11, 3.0, np.inf) == np.inf
    for bad in [(0, 2.0, 1.0), (3, 0.5, 1.0), (3, 2.0, 0.0)]:
        with pytest.raises(DomainError):
            theorem1_bound(*bad)


@given(distributions())
def test_entropy_range(p):
    r = len(p)
    h = shannon_entropy(p, base=r)
    assert -1e-15 <= h <= 1.0 + 1e-12
    assert 0.0 <= l1_distance(p, np.ones(r) / r) <= 2.0 + 1e-12


@given(distributions(), st.floats(1.5, 20))
def test_base_covariance(p, base):
    q = np.roll(p, 1)
    r = len(p)
    scale = math.log(base)
    for g in (shannon_entropy, lambda x, b: oecm(x, q, b)):
        assert g(p, base) * scale == pytest.approx(g(p, math.e), rel=1e-10, abs=1e-14)
    assert theorem1_bound(r, 2.0, 3.0, base) * scale == pytest.approx(theorem1_bound(r, 2.0, 3.0), rel=1e-12)


@given(st.integers(2, 12))
def test_classical_complexity_extremes(r):
    delta = np.zeros(r)
    delta[0] = 1
    assert classical_complexity(delta) == 0.0
    assert classical_complexity(np.ones(r) / r) < 1e-15


def test_series_helpers():
    t = np.linspace(0, 10, 11)
    probs = np.tile([0.5, 0.5], (11, 1))
    rec = ComplexityRecord.from_probabilities(t, probs, [1.0, 0.0], base=2)
    np.testing.assert_allclose(rec.oecm, 1.0)
    np.testing.assert_allclose(mean_oecm_series(rec), 1.0)
    zero = ComplexityRecord.from_probabilities(t, np.tile([1.0, 0.0], (11, 1)), [0.5, 0.5], base=2)
    np.testing.assert_array_equal(mean_oecm_series(zero), 0.0)
    np.testing.assert_allclose(oecm_of_mean_series(probs, [0.5, 0.5]), 0.0)


def test_bound_report_fields():
    t = np.linspace(0, 1, 5)
    probs = np.tile([0.5, 0.5], (5, 1))
    rec = ComplexityRecord.from_probabilities(t, probs, [0.4, 0.6], base=2)
    f = np.array([np.inf, 8.0, 4.0, 2.0, 1.5])
    rep = bound_report(rec, probs, [0.4, 0.6], 2, 1.5, f, 0.1, 2)
    assert rep.mean_holds() and rep.of_mean_holds()
    assert rep.asymptotic_bound == pytest.approx(0.5 * math.sqrt(2 / 1.5))
    np.testing.assert_array_equal(rep.epsilon_used, 0.1)
