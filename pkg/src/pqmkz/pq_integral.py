"""(p,q)-Jackson integral over [0, 1] and the (p,q)-Beta function.

The integral is the geometric sum

    int_0^1 f(t) d_{p,q}t = (p - q) * sum_{j>=0} q^j/p^(j+1) * f(q^j/p^(j+1)).

Nodes start at 1/p, so for p < 1 the integrand must be evaluable slightly
beyond 1. The Beta function gets a factorial closed form and the defining
integral; the two are independent and are used to check each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .pq_core import DomainError, PQParams, TruncationError, log_pq_factorial

DEFAULT_TOL = 1e-14
DEFAULT_MAX_TERMS = 200_000
_CHUNK = 64
_MIN_TERMS = 8


@dataclass(frozen=True)
class IntegralResult:
    value: float
    terms_used: int
    tail_bound: float


def jackson_nodes(params: PQParams, start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes q^j/p^(j+1) and weights (p-q) q^j/p^(j+1) for j in [start, stop)."""
    j = np.arange(start, stop, dtype=float)
    nodes = params.ratio**j / params.p
    return nodes, (params.p - params.q) * nodes


def jackson_integral(
    f,
    params: PQParams,
    tol: float = DEFAULT_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> IntegralResult:
    """Sum the Jackson series until the remainder bound drops below ``tol``.

    After ``J`` nodes the remaining weight is exactly ``(q/p)^J``. The
    remainder is bounded by that weight times twice the largest ``|f|``
    among the last three evaluated nodes, which is conservative for
    integrands that settle monotonically towards t = 0.

    ``f`` must accept a numpy array of nodes.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    parts: list[float] = []
    last3 = np.zeros(0)
    used = 0
    tail = math.inf
    while used < max_terms:
        stop = min(used + _CHUNK, max_terms)
        nodes, weights = jackson_nodes(params, used, stop)
        values = np.asarray(f(nodes), dtype=float)
        if values.shape != nodes.shape:
            values = np.broadcast_to(values, nodes.shape)
        if not np.all(np.isfinite(values)):
            raise DomainError("integrand is not finite on the Jackson node set")
        # Fixed ascending-j summation order keeps results reproducible.
        parts.extend((weights * values).tolist())
        last3 = np.concatenate([last3, values])[-3:]
        used = stop
        tail = params.ratio**used * 2.0 * float(np.max(np.abs(last3)))
        if used >= _MIN_TERMS and tail < tol:
            return IntegralResult(math.fsum(parts), used, tail)
    raise TruncationError(
        f"Jackson sum did not converge: tail bound {tail:.3e} >= tol {tol:.3e} "
        f"after {used} terms (p={params.p}, q={params.q})"
    )


def _check_beta_args(t: int, s: int) -> tuple[int, int]:
    if int(t) != t or int(s) != s or t < 1 or s < 1:
        raise DomainError(f"beta arguments must be positive integers, got t={t!r}, s={s!r}")
    return int(t), int(s)


def log_pq_beta_closed(t: int, s: int, params: PQParams) -> float:
    t, s = _check_beta_args(t, s)
    expo = ((s + t - 1) * (s + t - 2) - (t - 1) * (t - 2)) / 2 - t + 1
    return (
        expo * math.log(params.p)
        + log_pq_factorial(t - 1, params)
        + log_pq_factorial(s - 1, params)
        - log_pq_factorial(s + t - 1, params)
    )


def pq_beta_closed(t: int, s: int, params: PQParams) -> float:
    """Factorial closed form of beta_{p,q}(t, s) for positive integers t, s.

    beta = p^e [t-1]! [s-1]! / [s+t-1]!,
    e = ((s+t-1)(s+t-2) - (t-1)(t-2))/2 - t + 1.
    """
    return math.exp(log_pq_beta_closed(t, s, params))


def beta_integrand(t: int, s: int, params: PQParams):
    """x^(t-1) (1 - qx)^(s-1)_{p,q} as a vectorised callable."""
    t, s = _check_beta_args(t, s)
    p, q = params.p, params.q

    def g(x):
        x = np.asarray(x, dtype=float)
        out = x ** (t - 1)
        for j in range(s - 1):
            out = out * (p**j - q ** (j + 1) * x)
        return out

    return g


def pq_beta_integral(
    t: int, s: int, params: PQParams, tol: float = DEFAULT_TOL
) -> IntegralResult:
    """beta_{p,q}(t, s) by Jackson summation of its defining integral."""
    return jackson_integral(beta_integrand(t, s, params), params, tol)
