"""Brute-force double sum for the Durrmeyer operator.

Written straight from the definitions with plain factorials, literal basis
weights and a fixed number of Jackson nodes. It shares no code with the
recurrence/closed-form path in :mod:`pqmkz.operator` and exists only to
check it. Valid while [n+K+1]! stays inside binary64 (n + K up to ~180
for the usual parameters).
"""

import numpy as np


def _int(m, p, q):
    return (p**m - q**m) / (p - q)


def _fact(m, p, q):
    out = 1.0
    for i in range(1, m + 1):
        out *= _int(i, p, q)
    return out


def _binom(m, k, p, q):
    return _fact(m, p, q) / (_fact(k, p, q) * _fact(m - k, p, q))


def basis_weight(n, k, x, p, q):
    prod = 1.0
    for j in range(n + 1):
        prod *= p**j - q**j * x
    return _binom(n + k, k, p, q) * x**k * prod / p ** (k * n + n * (n + 1) / 2)


def kernel(n, k, t, p, q):
    t = np.asarray(t, dtype=float)
    prod = np.ones_like(t)
    for j in range(n):
        prod = prod * (p**j - q ** (j + 1) * t)
    return _binom(n + k + 1, k, p, q) * (q * t) ** k * prod / p ** (k * (n - 1) + n * (n - 1) / 2)


def inner_integrals(f, n, K, p, q, nodes=4000):
    """Jackson integrals of b_{n,k}(qt) f(t) for k = 0..K."""
    j = np.arange(nodes, dtype=float)
    t = q**j / p ** (j + 1)
    w = (p - q) * t
    ft = f(t)
    return [float(np.sum(w * kernel(n, k, t, p, q) * ft)) for k in range(K + 1)]


def operator_value(f, n, x, p, q, K, nodes=4000, integrals=None):
    """sum_{k=0..K} of the operator series at x, integrals by fixed Jackson sums."""
    if integrals is None:
        integrals = inner_integrals(f, n, K, p, q, nodes)
    total = 0.0
    for k in range(K + 1):
        total += basis_weight(n, k, x, p, q) * (p * q) ** (-k) * integrals[k]
    return _int(n + 1, p, q) / p**n * total
