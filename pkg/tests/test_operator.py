import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqmkz import bruteforce
from pqmkz.functions import (
    NAMED_NONPOLY,
    TEST_POLYNOMIALS,
    Function1D,
    constant,
    lincomb,
    monomial,
    polynomial,
)
from pqmkz.mkz import OperatorConfig
from pqmkz.operator import (
    apply,
    apply_monomial,
    central_moment,
    corollary1_bounds,
    moments,
    theorem1_bounds,
)
from pqmkz.pq_core import DomainError, PQParams, pq_integer

from conftest import MOMENT_PARAMS

P959 = PQParams(0.95, 0.9)
XS = [0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99]


def test_e0_is_one(params):
    for n in (1, 5, 25):
        for x in XS:
            assert apply(monomial(0), n, x, params).value == pytest.approx(1.0, abs=1e-9)
            assert apply_monomial(0, n, x, params).value == pytest.approx(1.0, abs=1e-9)


def test_constant(params):
    assert apply(constant(-2.5), 10, 0.4, params).value == pytest.approx(-2.5, rel=1e-10)


@pytest.mark.parametrize("n", [1, 3, 10, 25])
def test_e1_at_zero(params, n):
    expected = params.p**n / pq_integer(n + 2, params)
    assert apply(monomial(1), n, 0.0, params).value == pytest.approx(expected, rel=1e-12)
    assert central_moment(1, n, 0.0, params) == pytest.approx(expected, rel=1e-12)
    # same value by direct quadrature of the k = 0 term
    slow = apply(monomial(1), n, 0.0, params, method="jackson").value
    assert slow == pytest.approx(expected, rel=1e-10)


def test_e1_at_zero_bruteforce():
    n, p, q = 4, 0.9, 0.8
    brute = bruteforce.operator_value(monomial(1), n, 0.0, p, q, K=0)
    assert brute == pytest.approx(p**n / pq_integer(n + 2, PQParams(p, q)), rel=1e-10)


def test_theorem1_examples():
    assert theorem1_bounds(0, 10, 0.5, P959).holds
    r1 = theorem1_bounds(1, 10, 0.5, P959)
    assert r1.lower <= r1.actual <= r1.upper
    r2 = theorem1_bounds(2, 10, 0.5, P959)
    assert r2.actual <= r2.upper and r2.lower == -math.inf
    assert theorem1_bounds(1, 25, 0.3, P959).holds
    assert theorem1_bounds(2, 25, 0.3, P959).holds


def test_theorem1_e0_bounds_are_exact():
    r = theorem1_bounds(0, 7, 0.2, P959)
    assert r.lower == r.upper == 1.0


def test_corollary_examples():
    psi1 = central_moment(1, 10, 0.5, P959)
    q = 0.9
    upper = (0.95**10 - q**10 * 0.5) / (q**2 * pq_integer(10, P959)) + (1 / q - 1) * 0.5
    assert psi1 <= upper
    assert corollary1_bounds(1, 25, 0.5, P959).holds
    assert corollary1_bounds(2, 25, 0.5, P959).holds


def test_corollary_psi2_at_zero(params):
    n = 12
    p, q = params.p, params.q
    expected = p * (p + q) / q**6 * p**n * p ** (n - 1) / (pq_integer(n, params) * pq_integer(n - 1, params))
    r = corollary1_bounds(2, n, 0.0, params)
    assert r.upper == pytest.approx(expected, rel=1e-13)
    assert r.holds


@pytest.mark.parametrize("pr", MOMENT_PARAMS, ids=str)
@pytest.mark.parametrize("n", [2, 5, 10, 25, 50])
def test_bounds_hold_on_grid(pr, n):
    for x in np.linspace(0, 0.99, 12):
        for i in (0, 1, 2):
            assert theorem1_bounds(i, n, x, pr).holds
        for i in (1, 2):
            assert corollary1_bounds(i, n, x, pr).holds


def test_bounds_order_validation():
    with pytest.raises(DomainError):
        theorem1_bounds(3, 5, 0.2, P959)
    with pytest.raises(DomainError):
        corollary1_bounds(0, 5, 0.2, P959)
    with pytest.raises(DomainError):
        theorem1_bounds(2, 1, 0.2, P959)


def test_psi2_nonnegative(params):
    for n in (1, 4, 25):
        for x in XS:
            assert central_moment(2, n, x, params) >= -1e-12


def test_moments_share_weights(params):
    m = moments(9, 0.35, params)
    for s in range(3):
        assert m[s] == pytest.approx(apply_monomial(s, 9, 0.35, params).value, rel=1e-14)


# ---------------------------------------------------------------- structural properties


def test_positivity_nonpolynomial(params):
    for name, f in NAMED_NONPOLY.items():
        assert apply(f, 6, 0.4, params).value >= 0, name


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.floats(-2, 2), min_size=1, max_size=4),
    st.lists(st.floats(-2, 2), min_size=1, max_size=4),
    st.floats(-3, 3),
    st.floats(-3, 3),
    st.floats(0, 0.95),
)
def test_linearity(cf, cg, a, b, x):
    f, g = polynomial(cf), polynomial(cg)
    lhs = apply(lincomb(a, f, b, g), 10, x, P959).value
    rhs = a * apply(f, 10, x, P959).value + b * apply(g, 10, x, P959).value
    assert lhs == pytest.approx(rhs, abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-2, 2), min_size=1, max_size=4), st.floats(0, 2), st.floats(0, 0.95))
def test_monotonicity(cf, c, x):
    # g = f + (t - 1/2)^2 + c >= f everywhere
    f = polynomial(cf)
    g = lincomb(1.0, f, 1.0, polynomial([0.25 + c, -1.0, 1.0]))
    assert apply(f, 8, x, P959).value <= apply(g, 8, x, P959).value + 1e-10


@pytest.mark.parametrize("name", sorted(TEST_POLYNOMIALS))
@pytest.mark.parametrize("n", [1, 4, 10])
def test_fast_path_matches_quadrature(params, name, n):
    f = TEST_POLYNOMIALS[name]
    for x in (0.0, 0.3, 0.8):
        fast = apply(f, n, x, params).value
        slow = apply(f, n, x, params, method="jackson").value
        assert slow == pytest.approx(fast, rel=1e-8, abs=1e-12)


@pytest.mark.parametrize("n,K", [(1, 40), (3, 20), (5, 40)])
def test_bruteforce_oracle(params, n, K):
    cfg = OperatorConfig(fixed_k=K)
    funcs = [TEST_POLYNOMIALS["quadratic"], TEST_POLYNOMIALS["quintic"], NAMED_NONPOLY["abs_half"]]
    for f in funcs:
        integrals = bruteforce.inner_integrals(f, n, K, params.p, params.q)
        for x in (0.0, 0.2, 0.5, 0.7):
            brute = bruteforce.operator_value(f, n, x, params.p, params.q, K, integrals=integrals)
            assert apply(f, n, x, params, cfg).value == pytest.approx(brute, rel=1e-8, abs=1e-12)


def test_nonpolynomial_against_closed_form_limit():
    # exp through quadrature vs its Taylor polynomial through the closed form
    taylor = polynomial([1 / math.factorial(i) for i in range(25)])
    for x in (0.1, 0.6):
        a = apply(NAMED_NONPOLY["exp"], 6, x, P959).value
        b = apply(taylor, 6, x, P959).value
        assert a == pytest.approx(b, rel=1e-10)


def test_closed_method_rejects_nonpolynomial():
    with pytest.raises(TypeError):
        apply(NAMED_NONPOLY["sqrt"], 5, 0.2, P959, method="closed")
    with pytest.raises(ValueError):
        apply(monomial(1), 5, 0.2, P959, method="simpson")


# ---------------------------------------------------------------- x = 1


def test_x_one_interpolates():
    f = TEST_POLYNOMIALS["quadratic"]
    assert apply(f, 10, 1.0, P959).value == pytest.approx(float(f(np.array([1.0]))[0]))
    assert apply(f, 10, 1.0, P959, OperatorConfig(x1_literal=True)).value == 1.0
    assert moments(10, 1.0, P959) == (1.0, 1.0, 1.0)


def test_x_out_of_range():
    with pytest.raises(DomainError):
        apply(monomial(1), 5, 1.2, P959)
    with pytest.raises(DomainError):
        apply(monomial(1), 5, -0.1, P959)


def test_tail_bound_reported(params):
    res = apply(TEST_POLYNOMIALS["cubic"], 25, 0.9, params, OperatorConfig(tail_tol=1e-12))
    assert 0 <= res.tail_bound <= 1e-12 * 10
    assert res.k_used > 0


def test_function_wrapper_accepts_plain_callable():
    f = Function1D(lambda t: np.cos(t), "cos")
    value = apply(f, 4, 0.3, P959, OperatorConfig(fixed_k=150)).value
    assert value == pytest.approx(bruteforce.operator_value(f, 4, 0.3, 0.95, 0.9, K=150), rel=1e-8)
