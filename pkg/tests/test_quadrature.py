import math

import numpy as np
import pytest

from coclgd.quadrature import GAUSS_LEGENDRE_5, gauss_legendre, get_rule, tanh_sinh


def test_gauss5_weights_symmetric_and_sum_to_two():
    w = GAUSS_LEGENDRE_5.weights
    np.testing.assert_allclose(w, w[::-1])
    assert w.sum() == pytest.approx(2.0, abs=1e-9)


@pytest.mark.parametrize("degree", range(10))
def test_gauss5_exact_to_degree_nine(degree):
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert GAUSS_LEGENDRE_5.integrate(lambda t: t ** degree) == pytest.approx(exact, abs=1e-9)


def test_gauss_legendre_matches_numpy():
    rule = gauss_legendre(20)
    assert rule.integrate(np.exp) == pytest.approx(math.e - 1 / math.e, rel=1e-14)


def test_tanh_sinh_endpoint_singularities():
    rule = tanh_sinh()
    # integral of (1 - t^2)^(-1/4) over [-1, 1] is sqrt(pi) Gamma(3/4) / Gamma(5/4)
    exact = math.sqrt(math.pi) * math.gamma(0.75) / math.gamma(1.25)
    val = np.dot(rule.weights, (rule.one_minus * rule.one_plus) ** -0.25)
    assert val == pytest.approx(exact, rel=1e-12)
    # (1 - t^2)^(-1/2) integrates to pi; the truncated end slivers cost ~ sqrt(1e-18)
    val = np.dot(rule.weights, 1.0 / np.sqrt(rule.one_minus * rule.one_plus))
    assert val == pytest.approx(math.pi, rel=1e-8)
    # integral of -log(1 - t) over [-1, 1] is 2 - 2 log 2
    val = np.dot(rule.weights, -np.log(rule.one_minus))
    assert val == pytest.approx(2.0 - 2.0 * math.log(2.0), rel=1e-12)


def test_tanh_sinh_complements_consistent():
    rule = tanh_sinh()
    mid = np.abs(rule.nodes) < 0.5
    np.testing.assert_allclose(rule.one_minus[mid], 1 - rule.nodes[mid], rtol=1e-14)
    assert np.all(rule.one_minus > 0) and np.all(rule.one_plus > 0)


def test_get_rule():
    assert get_rule("gauss5") is GAUSS_LEGENDRE_5
    assert get_rule("tanh-sinh").name.startswith("tanh-sinh")
    with pytest.raises(ValueError):
        get_rule("simpson")
