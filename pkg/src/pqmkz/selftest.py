"""Per-command self-checks: one identity, one stated result, one oracle.

Each check is a row (kind, name, value, expected, tol, passed) where kind is
``identity`` (follows from the definitions), ``stated`` (a result the
operator theory asserts) or ``oracle`` (independent recomputation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import bruteforce
from .convergence import alpha_n, natural_density, scheme_sequences, sup_error
from .functions import TEST_POLYNOMIALS, constant, monomial
from .mkz import OperatorConfig, lemma3_check
from .operator import apply, apply_monomial, central_moment, corollary1_bounds, theorem1_bounds
from .pq_core import PQParams, pq_integer


@dataclass(frozen=True)
class Check:
    kind: str
    name: str
    value: float
    expected: float
    tol: float

    @property
    def passed(self) -> bool:
        return abs(self.value - self.expected) <= self.tol

    def row(self):
        return (self.kind, self.name, self.value, self.expected, self.tol, self.passed)


HEADER = ("kind", "check", "value", "expected", "tol", "passed")


def _operator_checks(n: int, params: PQParams, config: OperatorConfig) -> list[Check]:
    p = params.p
    return [
        Check("identity", "M(const 2.5; 0.4) = 2.5", apply(constant(2.5), n, 0.4, params, config).value, 2.5, 1e-9),
        Check("stated", "M(e0; 0.5) = 1", apply_monomial(0, n, 0.5, params, config).value, 1.0, 1e-9),
        Check(
            "oracle",
            "M(e1; 0) = p^n/[n+2]",
            apply_monomial(1, n, 0.0, params, config).value,
            p**n / pq_integer(n + 2, params),
            1e-12,
        ),
    ]


def eval_checks(n, params, config):
    checks = _operator_checks(n, params, config)
    f = TEST_POLYNOMIALS["quadratic"]
    m = min(n, 6)
    checks.append(
        Check(
            "oracle",
            f"closed vs Jackson route, quadratic, n={m}, x=0.3",
            apply(f, m, 0.3, params, config, method="closed").value,
            apply(f, m, 0.3, params, config, method="jackson").value,
            1e-8,
        )
    )
    return checks


def moments_checks(n, params, config):
    checks = _operator_checks(n, params, config)
    checks.append(
        Check("oracle", "psi1(0) = p^n/[n+2]", central_moment(1, n, 0.0, params, config),
              params.p**n / pq_integer(n + 2, params), 1e-12)
    )
    return checks


def bounds_checks(n, params, config):
    n = max(n, 2)
    p, q = params.p, params.q
    rep = corollary1_bounds(2, n, 0.0, params, config)
    expected_upper = p * (p + q) / q**6 * p**n * p ** (n - 1) / (
        pq_integer(n, params) * pq_integer(n - 1, params)
    )
    return [
        Check("identity", "lemma3 at r=0", float(lemma3_check(n, 1, 0, params)), 1.0, 0.0),
        Check("stated", "theorem1 i=0 holds", float(theorem1_bounds(0, n, 0.5, params, config).holds), 1.0, 0.0),
        Check("oracle", "corollary1 psi2 upper at x=0", rep.upper, expected_upper, 1e-12 * abs(expected_upper)),
    ]


def converge_checks(n, scheme, config):
    params = scheme(1000)
    pn = scheme(n)
    return [
        Check("identity", "sup_error(const) = 0", sup_error(constant(0.7), n, scheme, config), 0.0, 1e-9),
        Check("stated", "1/[1000]_{p_n,q_n} < 0.01", float(1.0 / pq_integer(1000, params) < 0.01), 1.0, 0.0),
        Check(
            "oracle",
            "alpha_n(0) = p^n/(q^2 [n])",
            alpha_n(n, 0.0, scheme),
            pn.p**n / (pn.q**2 * pq_integer(n, pn)),
            1e-12,
        ),
    ]


def statdemo_checks(scheme, N):
    seq, limit = scheme_sequences(scheme)["p_n^n"]
    squares = natural_density(lambda j: math.isqrt(j) ** 2 == j, 10_000)
    return [
        Check("identity", "density of all integers = 1", natural_density(lambda j: True, N).density, 1.0, 0.0),
        Check("stated", "p_n^n at n=10^4 vs e^(-1/3)", seq(10_000), limit, 1e-3),
        Check("oracle", "density of squares up to 10^4", squares.density, math.isqrt(10_000) / 10_000, 0.0),
    ]


def figures_checks(n, params, K):
    config = OperatorConfig(fixed_k=K)
    f = TEST_POLYNOMIALS["quadratic"]
    e0 = monomial(0)
    brute = bruteforce.operator_value(f, n, 0.0, params.p, params.q, K)
    mx = np.array([apply(f, n, x, params, config).value for x in (0.0, 0.5)])
    return [
        Check("identity", "abs_error >= 0", float(np.all(np.abs(mx - f(np.array([0.0, 0.5]))) >= 0)), 1.0, 0.0),
        Check("stated", "M(e0; 0.3) = 1", apply(e0, n, 0.3, params, config).value, 1.0, 1e-9),
        Check("oracle", "quadratic at x=0 vs brute-force double sum", mx[0], brute, 1e-8),
    ]

