import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqmkz.pq_core import (
    DomainError,
    PQParams,
    log_one_minus,
    log_pq_binomial,
    log_pq_factorial,
    log_pq_factorials,
    log_pq_integer,
    one_minus,
    pq_binomial,
    pq_factorial,
    pq_falling,
    pq_integer,
    pq_power_product,
)

P98 = PQParams(0.9, 0.8)


@st.composite
def pq_params(draw):
    q = draw(st.floats(0.05, 0.95))
    p = draw(st.floats(q + 0.01, 1.0))
    return PQParams(p, q)


def q_integer(n, q):
    return (1 - q**n) / (1 - q)


def q_factorial(n, q):
    out = 1.0
    for i in range(1, n + 1):
        out *= q_integer(i, q)
    return out


@pytest.mark.parametrize("p,q", [(0.9, 0.9), (0.8, 0.9), (1.1, 0.5), (0.5, 0.0), (1.0, -0.1)])
def test_params_reject_invalid(p, q):
    with pytest.raises(DomainError):
        PQParams(p, q)


def test_params_accept_p_one():
    assert PQParams(1, 0.5).p == 1.0


def test_pq_integer_examples(params):
    assert pq_integer(0, params) == 0
    assert pq_integer(1, params) == pytest.approx(1.0, rel=1e-15)


def test_pq_integer_frozen():
    # (0.729 - 0.512) / 0.1
    assert pq_integer(3, P98) == pytest.approx(2.17, rel=1e-14)


def test_pq_integer_negative_rejected():
    with pytest.raises(DomainError):
        pq_integer(-1, P98)


@given(pq_params(), st.integers(0, 400))
def test_pq_integer_recurrence(pr, n):
    nxt = pq_integer(n + 1, pr)
    assert nxt >= 0
    assert nxt == pytest.approx(pr.p**n + pr.q * pq_integer(n, pr), rel=1e-12, abs=1e-300)


@given(pq_params(), st.integers(1, 300))
def test_log_integer_matches_linear(pr, n):
    assert math.exp(log_pq_integer(n, pr)) == pytest.approx(pq_integer(n, pr), rel=1e-13)


def test_factorial_frozen():
    assert pq_factorial(0, P98) == 1.0
    # 1 * 1.7 * 2.17
    assert pq_factorial(3, P98) == pytest.approx(3.689, rel=1e-14)


def test_factorial_overflow_signals_log_space():
    pr = PQParams(1.0, 0.99)  # [m] climbs towards 100
    with pytest.raises(OverflowError):
        pq_factorial(400, pr)
    assert math.isfinite(log_pq_factorial(400, pr))


@pytest.mark.parametrize("n", [0, 1, 5, 20, 60])
def test_log_linear_factorial_agree(params, n):
    assert math.exp(log_pq_factorial(n, params)) == pytest.approx(pq_factorial(n, params), rel=1e-10)


def test_log_factorial_table_matches_scalar(params):
    table = log_pq_factorials(40, params)
    for m in (0, 1, 7, 40):
        assert table[m] == pytest.approx(log_pq_factorial(m, params), abs=1e-12)


@pytest.mark.parametrize("n", range(0, 8))
def test_p_one_reduces_to_q_calculus(n):
    q = 0.7
    pr = PQParams(1.0, q)
    assert pq_integer(n, pr) == pytest.approx(q_integer(n, q), rel=1e-13, abs=0)
    assert pq_factorial(n, pr) == pytest.approx(q_factorial(n, q), rel=1e-13)
    for k in range(n + 1):
        expected = q_factorial(n, q) / (q_factorial(k, q) * q_factorial(n - k, q))
        assert pq_binomial(n, k, pr) == pytest.approx(expected, rel=1e-13)


def test_binomial_examples(params):
    assert pq_binomial(7, 0, params) == 1.0
    assert pq_binomial(2, 1, P98) == pytest.approx(1.7, rel=1e-14)


def test_binomial_log_oracle():
    # [4]!/([2]![2]!) through the log-space factorials
    oracle = math.exp(log_pq_factorial(4, P98) - 2 * log_pq_factorial(2, P98))
    assert pq_binomial(4, 2, P98) == pytest.approx(oracle, rel=1e-13)


def test_binomial_domain():
    with pytest.raises(DomainError):
        pq_binomial(3, 4, P98)


@pytest.mark.parametrize("n", range(0, 31))
def test_binomial_factorial_consistency(params, n):
    for k in range(n + 1):
        ratio = pq_factorial(n, params) / (pq_factorial(k, params) * pq_factorial(n - k, params))
        assert pq_binomial(n, k, params) == pytest.approx(ratio, rel=1e-12)


@given(pq_params(), st.integers(0, 80), st.data())
def test_binomial_symmetric(pr, n, data):
    k = data.draw(st.integers(0, n))
    assert pq_binomial(n, k, pr) == pytest.approx(pq_binomial(n, n - k, pr), rel=1e-12)
    assert log_pq_binomial(n, k, pr) == pytest.approx(log_pq_binomial(n, n - k, pr), abs=1e-10)


def test_binomial_classical_limit():
    # p = 1, q -> 1- approaches C(10, 4) = 210
    errs = [abs(pq_binomial(10, 4, PQParams(1.0, 1 - h)) - 210) for h in (1e-2, 1e-3, 1e-4)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 0.5


def test_falling():
    assert pq_falling(6, 0, P98) == 1.0
    assert pq_falling(6, 1, P98) == pq_integer(6, P98)
    assert pq_falling(5, 2, P98) == pytest.approx(pq_integer(5, P98) * pq_integer(4, P98), rel=1e-15)
    with pytest.raises(DomainError):
        pq_falling(2, 3, P98)


def test_power_product():
    assert pq_power_product(0.3, 0.8, 0, P98) == 1.0
    n = 6
    assert one_minus(0.0, n + 1, P98) == pytest.approx(0.9 ** (n * (n + 1) / 2), rel=1e-14)
    # (1 - 1)(0.9 - 0.8)(0.81 - 0.64): first factor vanishes
    assert one_minus(1.0, 3, P98) == 0.0
    x = 0.4
    direct = (1 - x) * (0.9 - 0.8 * x) * (0.81 - 0.64 * x)
    assert one_minus(x, 3, P98) == pytest.approx(direct, rel=1e-15)
    assert math.exp(log_one_minus(x, 3, P98)) == pytest.approx(direct, rel=1e-14)


def test_one_minus_near_degenerate():
    # p, q close together: every factor p^j - q^j is small
    pr = PQParams(0.9999, 0.999)
    assert abs(one_minus(1.0, 3, pr)) < 1e-5


@settings(max_examples=50)
@given(pq_params(), st.integers(1, 120))
def test_log_linear_agreement_property(pr, n):
    try:
        linear = pq_factorial(n, pr)
    except OverflowError:
        return
    assert math.exp(log_pq_factorial(n, pr)) == pytest.approx(linear, rel=1e-10)
