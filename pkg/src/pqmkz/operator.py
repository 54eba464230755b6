"""Evaluation of the (p,q)-MKZ Durrmeyer operator.

    M(f; x) = [n+1]/p^n * sum_k m_{n,k}(x) (pq)^-k int_0^1 b_{n,k}(qt) f(t) d_{p,q}t

Polynomials go through the closed-form kernel moments (no quadrature);
anything else is integrated term by term with the Jackson sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .functions import Function1D, monomial
from .mkz import OperatorConfig, durrmeyer_factors, mkz_weights, normalized_kernel
from .pq_core import DomainError, PQParams, pq_integer
from .pq_integral import jackson_integral

BOUND_SLACK = 1e-9


@dataclass(frozen=True)
class EvalResult:
    value: float
    k_used: int
    tail_bound: float
    per_term_integral_tol: float


@dataclass(frozen=True)
class BoundsReport:
    x: float
    actual: float
    lower: float
    upper: float
    holds: bool


def _report(x: float, actual: float, lower: float, upper: float) -> BoundsReport:
    slack = BOUND_SLACK * (1.0 + abs(upper))
    holds = (lower - slack <= actual) and (actual <= upper + slack)
    return BoundsReport(x, actual, lower, upper, bool(holds))


def _check_x(x: float) -> float:
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise DomainError(f"x must lie in [0, 1], got {x!r}")
    return x


def _sup_abs(f: Function1D, params: PQParams) -> float:
    # grid estimate of sup|f| over [0, 1/p], the span of the Jackson nodes
    t = np.linspace(0.0, 1.0 / params.p, 1025)
    return float(np.max(np.abs(f(t))))


def _at_one(f: Function1D, config: OperatorConfig) -> EvalResult:
    value = 1.0 if config.x1_literal else float(f(np.array([1.0]))[0])
    return EvalResult(value, 0, 0.0, 0.0)


def _poly_value(coeffs, n: int, weights: np.ndarray, params: PQParams) -> float:
    ks = np.arange(len(weights), dtype=float)
    per_k = np.zeros_like(ks)
    for s, c in enumerate(coeffs):
        if c:
            per_k = per_k + c * durrmeyer_factors(n, s, ks, params)
    return math.fsum(weights * per_k)


def apply(
    f: Function1D,
    n: int,
    x: float,
    params: PQParams,
    config: OperatorConfig = OperatorConfig(),
    method: str = "auto",
) -> EvalResult:
    """Evaluate M(f; x).

    ``method`` is ``"auto"`` (closed form for polynomials, Jackson sums
    otherwise), ``"closed"`` or ``"jackson"``. At x = 1 the operator returns
    f(1) unless ``config.x1_literal`` asks for the constant 1.
    """
    if method not in ("auto", "closed", "jackson"):
        raise ValueError(f"unknown method {method!r}")
    x = _check_x(x)
    if x == 1.0:
        return _at_one(f, config)
    ws = mkz_weights(n, x, params, config)
    tail = ws.deficit * _sup_abs(f, params)

    if method == "closed" or (method == "auto" and f.is_polynomial):
        if not f.is_polynomial:
            raise TypeError("closed-form evaluation needs a polynomial")
        return EvalResult(_poly_value(f.coeffs, n, ws.weights, params), ws.K, tail, 0.0)

    tol = config.integral_tol
    terms = []
    for k, w in enumerate(ws.weights):
        if w == 0.0:
            continue
        inner = jackson_integral(
            lambda t, k=k: normalized_kernel(n, k, t, params) * f(t), params, tol
        )
        terms.append(w * inner.value)
    return EvalResult(math.fsum(terms), ws.K, tail, tol)


def apply_monomial(
    s: int, n: int, x: float, params: PQParams, config: OperatorConfig = OperatorConfig()
) -> EvalResult:
    """M(t^s; x) from the closed-form kernel moments."""
    if s < 0:
        raise DomainError(f"s must be nonnegative, got {s!r}")
    x = _check_x(x)
    if x == 1.0:
        return _at_one(monomial(s), config)
    ws = mkz_weights(n, x, params, config)
    ks = np.arange(ws.K + 1, dtype=float)
    value = math.fsum(ws.weights * durrmeyer_factors(n, s, ks, params))
    return EvalResult(value, ws.K, ws.deficit, 0.0)


def moments(
    n: int, x: float, params: PQParams, config: OperatorConfig = OperatorConfig()
) -> tuple[float, float, float]:
    """(M(e0), M(e1), M(e2)) at x sharing one weight vector."""
    x = _check_x(x)
    if x == 1.0:
        # e_i(1) = 1, so both x = 1 conventions agree here
        return 1.0, 1.0, 1.0
    ws = mkz_weights(n, x, params, config)
    ks = np.arange(ws.K + 1, dtype=float)
    return tuple(
        math.fsum(ws.weights * durrmeyer_factors(n, s, ks, params)) for s in range(3)
    )


def central_moment(
    i: int, n: int, x: float, params: PQParams, config: OperatorConfig = OperatorConfig()
) -> float:
    """M((t - x)^i; x) for i in {1, 2}, assembled by linearity."""
    if i not in (1, 2):
        raise DomainError(f"central moment order must be 1 or 2, got {i!r}")
    _, m1, m2 = moments(n, x, params, config)
    if i == 1:
        return m1 - x
    return m2 - 2.0 * x * m1 + x * x


def _shared_terms(n: int, x: float, params: PQParams):
    if n < 2:
        raise DomainError(f"second-moment bounds need n >= 2, got {n!r}")
    p, q = params.p, params.q
    a = p**n - q**n * x
    b = p ** (n - 1) - q ** (n - 1) * x
    nn = pq_integer(n, params)
    nn1 = pq_integer(n - 1, params)
    linear = (p + q) ** 2 / q**5 * a / nn * x
    product = p * (p + q) / q**6 * a * b / (nn * nn1)
    return a, nn, linear, product


def theorem1_bounds(
    i: int, n: int, x: float, params: PQParams, config: OperatorConfig = OperatorConfig()
) -> BoundsReport:
    """Compare M(e_i; x) against its stated two-sided (or upper) bound."""
    x = _check_x(x)
    q = params.q
    if i == 0:
        return _report(x, apply_monomial(0, n, x, params, config).value, 1.0, 1.0)
    if i == 1:
        nn = pq_integer(n, params)
        a = params.p**n - q**n * x
        lower = x / q**2 * (1.0 - (q + 1.0) / nn)
        upper = x / q + a / (q**2 * nn)
        return _report(x, apply_monomial(1, n, x, params, config).value, lower, upper)
    if i == 2:
        _, _, linear, product = _shared_terms(n, x, params)
        upper = x * x / q**2 + linear + product
        return _report(x, apply_monomial(2, n, x, params, config).value, -math.inf, upper)
    raise DomainError(f"moment order must be 0, 1 or 2, got {i!r}")


def corollary1_bounds(
    i: int, n: int, x: float, params: PQParams, config: OperatorConfig = OperatorConfig()
) -> BoundsReport:
    """Compare the central moments against their stated upper bounds.

    Only upper bounds are stated, so ``lower`` is always ``-inf``.
    """
    x = _check_x(x)
    q = params.q
    if i == 1:
        nn = pq_integer(n, params)
        upper = (params.p**n - q**n * x) / (q**2 * nn) + (1.0 / q - 1.0) * x
    elif i == 2:
        _, nn, linear, product = _shared_terms(n, x, params)
        upper = x * x * (1.0 - 1.0 / q**2 + 2.0 * (q + 1.0) / (q**2 * nn)) + linear + product
    else:
        raise DomainError(f"central moment order must be 1 or 2, got {i!r}")
    return _report(x, central_moment(i, n, x, params, config), -math.inf, upper)
