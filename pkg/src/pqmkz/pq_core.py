"""(p,q)-combinatorics: integers, factorials, binomials and power products.

Every quantity has a linear-space evaluator and a log-space twin. The
linear versions overflow binary64 once indices reach a few hundred for
moderate (p, q); anything that touches ``[n+k+s+1]!`` should go through
the ``log_*`` functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


class TruncationError(RuntimeError):
    """A series did not reach its tail tolerance within the term cap."""


@dataclass(frozen=True)
class PQParams:
    """The pair (p, q) with 0 < q < p <= 1."""

    p: float
    q: float

    def __post_init__(self):
        p, q = float(self.p), float(self.q)
        if not (0.0 < q < p <= 1.0):
            raise DomainError(f"need 0 < q < p <= 1, got p={self.p!r}, q={self.q!r}")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def ratio(self) -> float:
        """q/p, the common ratio of the Jackson node set."""
        return self.q / self.p


def _check_nonneg(name: str, value: int) -> int:
    if int(value) != value or value < 0:
        raise DomainError(f"{name} must be a nonnegative integer, got {value!r}")
    return int(value)


def pq_integer(n: int, params: PQParams) -> float:
    """[n]_{p,q} = (p^n - q^n) / (p - q)."""
    n = _check_nonneg("n", n)
    p, q = params.p, params.q
    return (p**n - q**n) / (p - q)


def log_pq_integer(n: int, params: PQParams) -> float:
    """log [n]_{p,q}; ``-inf`` for n = 0."""
    n = _check_nonneg("n", n)
    if n == 0:
        return -math.inf
    p, q = params.p, params.q
    return n * math.log(p) + math.log1p(-(params.ratio**n)) - math.log(p - q)


def pq_integers(ns, params: PQParams) -> np.ndarray:
    """Vectorised [n]_{p,q} over an integer array."""
    ns = np.asarray(ns, dtype=float)
    p, q = params.p, params.q
    return (p**ns - q**ns) / (p - q)


def log_pq_integers(ns, params: PQParams) -> np.ndarray:
    """Vectorised log [n]_{p,q}; entries with n = 0 give ``-inf``."""
    ns = np.asarray(ns, dtype=float)
    p, q = params.p, params.q
    with np.errstate(divide="ignore"):
        return ns * math.log(p) + np.log1p(-(params.ratio**ns)) - math.log(p - q)


def pq_factorial(n: int, params: PQParams) -> float:
    """[n]_{p,q}! = [1][2]...[n], with [0]! = 1.

    Raises ``OverflowError`` when the product leaves the binary64 range;
    use :func:`log_pq_factorial` instead in that case.
    """
    n = _check_nonneg("n", n)
    out = 1.0
    for i in range(1, n + 1):
        out *= pq_integer(i, params)
    if math.isinf(out):
        raise OverflowError(f"[{n}]! overflows binary64; use log_pq_factorial")
    return out


def log_pq_factorial(n: int, params: PQParams) -> float:
    n = _check_nonneg("n", n)
    return math.fsum(log_pq_integer(i, params) for i in range(1, n + 1))


def log_pq_factorials(nmax: int, params: PQParams) -> np.ndarray:
    """Array of log [m]! for m = 0..nmax."""
    nmax = _check_nonneg("nmax", nmax)
    out = np.zeros(nmax + 1)
    if nmax:
        out[1:] = np.cumsum(log_pq_integers(np.arange(1, nmax + 1), params))
    return out


def _check_k_le_n(k: int, n: int, what: str) -> None:
    if k > n:
        raise DomainError(f"{what}: need {k} <= {n}")


def pq_binomial(n: int, k: int, params: PQParams) -> float:
    """(p,q)-binomial coefficient [n]!/([k]![n-k]!).

    Evaluated as the product of ratios [n-k+i]/[i], i = 1..min(k, n-k), so
    it stays finite whenever the result itself is representable.
    """
    n = _check_nonneg("n", n)
    k = _check_nonneg("k", k)
    _check_k_le_n(k, n, "pq_binomial")
    m = min(k, n - k)
    out = 1.0
    for i in range(1, m + 1):
        out *= pq_integer(n - m + i, params) / pq_integer(i, params)
    return out


def log_pq_binomial(n: int, k: int, params: PQParams) -> float:
    n = _check_nonneg("n", n)
    k = _check_nonneg("k", k)
    _check_k_le_n(k, n, "log_pq_binomial")
    m = min(k, n - k)
    return math.fsum(
        log_pq_integer(n - m + i, params) - log_pq_integer(i, params)
        for i in range(1, m + 1)
    )


def pq_falling(n: int, r: int, params: PQParams) -> float:
    """Falling factorial [n][n-1]...[n-r+1]; r = 0 gives 1."""
    n = _check_nonneg("n", n)
    r = _check_nonneg("r", r)
    _check_k_le_n(r, n, "pq_falling")
    out = 1.0
    for j in range(r):
        out *= pq_integer(n - j, params)
    return out


def log_pq_falling(n: int, r: int, params: PQParams) -> float:
    n = _check_nonneg("n", n)
    r = _check_nonneg("r", r)
    _check_k_le_n(r, n, "log_pq_falling")
    return math.fsum(log_pq_integer(n - j, params) for j in range(r))


def pq_power_product(x: float, y: float, n: int, params: PQParams) -> float:
    """(x + y)^n_{p,q} = prod_{j=0}^{n-1} (p^j x + q^j y)."""
    n = _check_nonneg("n", n)
    p, q = params.p, params.q
    out = 1.0
    for j in range(n):
        out *= p**j * x + q**j * y
    return out


def one_minus(x: float, m: int, params: PQParams) -> float:
    """(1 - x)^m_{p,q} = prod_{j=0}^{m-1} (p^j - q^j x)."""
    return pq_power_product(1.0, -x, m, params)


def log_one_minus(x: float, m: int, params: PQParams) -> float:
    """log (1 - x)^m_{p,q}; requires every factor to be positive."""
    m = _check_nonneg("m", m)
    p, q = params.p, params.q
    terms = [p**j - q**j * x for j in range(m)]
    if any(t <= 0 for t in terms):
        raise DomainError(f"(1 - x)^{m}_(p,q) has a nonpositive factor at x={x!r}")
    return math.fsum(math.log(t) for t in terms)
