import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqmkz.functions import lincomb, monomial, polynomial
from pqmkz.pq_core import DomainError, PQParams, TruncationError, pq_integer
from pqmkz.pq_integral import (
    jackson_integral,
    jackson_nodes,
    pq_beta_closed,
    pq_beta_integral,
)

P98 = PQParams(0.9, 0.8)


def geometric_oracle(s, params):
    """Closed geometric-series value of the Jackson sum of t^s."""
    p, q = params.p, params.q
    return (p - q) / p ** (s + 1) / (1 - (q / p) ** (s + 1))


def test_nodes_start_above_one_when_p_below_one():
    nodes, weights = jackson_nodes(P98, 0, 3)
    assert nodes[0] == pytest.approx(1 / 0.9)
    assert weights[0] == pytest.approx(0.1 / 0.9)


def test_constant_integrates_to_one(params):
    res = jackson_integral(lambda t: np.ones_like(t), params, 1e-14)
    assert res.value == pytest.approx(1.0, rel=1e-13)
    assert res.tail_bound < 1e-14


def test_identity_is_reciprocal_pq_two(params):
    res = jackson_integral(lambda t: t, params, 1e-14)
    assert res.value == pytest.approx(1 / (params.p + params.q), rel=1e-12)


@pytest.mark.parametrize("s", range(0, 7))
def test_monomial_law(params, s):
    value = jackson_integral(monomial(s), params, 1e-15).value
    assert value == pytest.approx(geometric_oracle(s, params), rel=1e-10)
    assert value == pytest.approx(1 / pq_integer(s + 1, params), rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.floats(-3, 3), min_size=1, max_size=5),
    st.lists(st.floats(-3, 3), min_size=1, max_size=5),
    st.floats(-2, 2),
    st.floats(-2, 2),
)
def test_linearity(cf, cg, a, b):
    f, g = polynomial(cf), polynomial(cg)
    pr = PQParams(0.95, 0.9)
    lhs = jackson_integral(lincomb(a, f, b, g), pr, 1e-15).value
    rhs = a * jackson_integral(f, pr, 1e-15).value + b * jackson_integral(g, pr, 1e-15).value
    assert lhs == pytest.approx(rhs, abs=1e-12)


def test_positivity(params):
    assert jackson_integral(lambda t: (t - 0.5) ** 2, params, 1e-14).value >= 0
    assert jackson_integral(lambda t: np.abs(np.sin(7 * t)), params, 1e-14).value >= 0


def test_nonconvergence_is_reported():
    with pytest.raises(TruncationError):
        jackson_integral(lambda t: np.ones_like(t), PQParams(1.0, 0.999), 1e-14, max_terms=100)


def test_bad_tolerance():
    with pytest.raises(DomainError):
        jackson_integral(lambda t: t, P98, 0.0)


def test_beta_closed_examples(params):
    assert pq_beta_closed(1, 1, params) == pytest.approx(1.0, rel=1e-15)


def test_beta_closed_frozen():
    # p^2 [1]! [1]! / [3]! = 0.81 / 3.689
    assert pq_beta_closed(2, 2, P98) == pytest.approx(0.81 / 3.689, rel=1e-14)
    assert pq_beta_closed(2, 2, P98) == pytest.approx(0.21957, abs=5e-6)


@pytest.mark.parametrize("t,s", [(1, 3), (2, 5), (4, 4), (6, 2)])
def test_beta_p_one_is_q_beta(t, s):
    q = 0.6
    pr = PQParams(1.0, q)

    def qfact(m):
        return math.prod((1 - q**i) / (1 - q) for i in range(1, m + 1))

    assert pq_beta_closed(t, s, pr) == pytest.approx(qfact(t - 1) * qfact(s - 1) / qfact(s + t - 1), rel=1e-13)


def test_beta_integral_examples(params):
    assert pq_beta_integral(1, 1, params).value == pytest.approx(1.0, rel=1e-13)
    assert pq_beta_integral(2, 2, P98).value == pytest.approx(pq_beta_closed(2, 2, P98), rel=1e-10)
    # n = 3: beta(1, n+2)
    assert pq_beta_integral(1, 5, P98).value == pytest.approx(pq_beta_closed(1, 5, P98), rel=1e-10)


def test_beta_two_two_by_hand():
    # int x (1 - qx) = 1/[2] - q/[3]
    by_hand = 1 / pq_integer(2, P98) - 0.8 / pq_integer(3, P98)
    assert pq_beta_integral(2, 2, P98).value == pytest.approx(by_hand, rel=1e-12)


def test_beta_rejects_non_integer():
    with pytest.raises(DomainError):
        pq_beta_closed(1.5, 2, P98)
    with pytest.raises(DomainError):
        pq_beta_closed(0, 2, P98)
