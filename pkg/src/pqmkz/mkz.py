"""Meyer-König-Zeller basis weights and the Durrmeyer kernel.

The weights

    m_{n,k}(x) = p^-(kn + n(n+1)/2) [n+k choose k] x^k (1-x)^{n+1}_{p,q}

form a partition of unity on [0, 1). They are generated by the ratio
recurrence m_{k+1}/m_k = [n+k+1]/[k+1] * x / p^n, which is O(1) per term
and never forms a factorial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .pq_core import (
    DomainError,
    PQParams,
    TruncationError,
    log_pq_binomial,
    log_pq_integer,
    pq_falling,
    pq_integer,
)

_CHUNK = 512
_SMALL_CHUNK = 16
_LOG_FLOOR = -600.0


@dataclass(frozen=True)
class OperatorConfig:
    """Series-truncation policy shared by every operator evaluation.

    ``fixed_k`` switches from mass-based stopping to a fixed last index
    ``K`` (weights ``m_0 .. m_K``), which is what the figure reproduction
    uses. ``x1_literal`` makes the operator return 1 at x = 1 instead of
    f(1).
    """

    tail_tol: float = 1e-12
    max_terms: int = 10_000
    fixed_k: Optional[int] = None
    integral_tol: float = 1e-14
    x1_literal: bool = False

    def __post_init__(self):
        if not (0.0 < self.tail_tol < 1.0):
            raise DomainError(f"tail_tol must lie in (0, 1), got {self.tail_tol!r}")
        if self.max_terms < 1:
            raise DomainError(f"max_terms must be >= 1, got {self.max_terms!r}")
        if self.fixed_k is not None and self.fixed_k < 1:
            raise DomainError(f"fixed_k must be >= 1, got {self.fixed_k!r}")
        if not self.integral_tol > 0:
            raise DomainError(f"integral_tol must be positive, got {self.integral_tol!r}")


@dataclass(frozen=True)
class WeightSlice:
    weights: np.ndarray
    K: int
    mass: float

    @property
    def deficit(self) -> float:
        """1 - mass, clipped at zero."""
        return max(0.0, 1.0 - self.mass)


def _check_x(x: float) -> float:
    x = float(x)
    if not (0.0 <= x < 1.0):
        raise DomainError(f"x must lie in [0, 1) for the basis series, got {x!r}")
    return x


def _log_seed(n: int, x: float, params: PQParams) -> float:
    # log m_{n,0}(x) = log (1-x)^{n+1}_{p,q} - n(n+1)/2 log p
    #               = sum_{j=0..n} log(1 - r^j x),  r = q/p,
    # since the p^j pulled out of each factor cancel the prefactor. Each
    # factor goes through expm1 so x near 1 loses no digits.
    j = np.arange(n + 1, dtype=float)
    return math.fsum(np.log(-np.expm1(j * math.log(params.ratio) + math.log(x))))


def _tail(ms, params: PQParams) -> np.ndarray:
    """1 - (q/p)^m, so that [m] = p^(m-1) (1 - (q/p)^m) / (1 - q/p).

    Ratios of (p,q)-integers written through this never form p^m, which
    underflows long before the series is done when p is well below one.
    """
    return -np.expm1(np.asarray(ms, dtype=float) * math.log(params.ratio))


def _ratios(n: int, x: float, params: PQParams, k0: int, k1: int) -> np.ndarray:
    """m_{k+1}/m_k = [n+k+1]/[k+1] x/p^n for k in [k0, k1)."""
    k = np.arange(k0, k1, dtype=float)
    return _tail(n + k + 1, params) / _tail(k + 1, params) * x


def mkz_weight(n: int, k: int, x: float, params: PQParams) -> float:
    """Single basis weight m_{n,k}(x) via the ratio recurrence."""
    x = _check_x(x)
    if k < 0:
        raise DomainError(f"k must be nonnegative, got {k!r}")
    if x == 0.0:
        return 1.0 if k == 0 else 0.0
    log_w = _log_seed(n, x, params)
    if k:
        log_w += float(np.sum(np.log(_ratios(n, x, params, 0, k))))
    return math.exp(log_w)


def mkz_weights(
    n: int, x: float, params: PQParams, config: OperatorConfig = OperatorConfig()
) -> WeightSlice:
    """Truncated weight vector m_{n,0}(x), ..., m_{n,K}(x).

    In mass mode, stops at the first K with partial sum >= 1 - tail_tol and
    raises :class:`TruncationError` if that needs more than ``max_terms``
    weights. In fixed-K mode exactly ``fixed_k + 1`` weights are returned.
    """
    x = _check_x(x)
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    fixed = config.fixed_k
    if x == 0.0:
        w = np.zeros(1 if fixed is None else fixed + 1)
        w[0] = 1.0
        w.flags.writeable = False
        return WeightSlice(w, len(w) - 1, 1.0)

    cap = fixed + 1 if fixed is not None else config.max_terms
    target = 1.0 - config.tail_tol
    # Running weight is v_last * exp(log_scale). log_scale stays nonzero only
    # while the weights sit below the binary64 range; short chunks then keep
    # the cumulative ratio product finite.
    log_seed = _log_seed(n, x, params)
    if log_seed > _LOG_FLOOR:
        v_last, log_scale = math.exp(log_seed), 0.0
    else:
        v_last, log_scale = 1.0, log_seed
    blocks: list[np.ndarray] = []
    running = 0.0
    chunk_sums: list[float] = []
    count = 0
    while count < cap:
        stop = min(count + (_CHUNK if log_scale == 0.0 else _SMALL_CHUNK), cap)
        if count == 0:
            steps = np.concatenate([[1.0], _ratios(n, x, params, 0, stop - 1)])
        else:
            steps = _ratios(n, x, params, count - 1, stop - 1)
        v = v_last * np.cumprod(steps)
        w = v * math.exp(log_scale) if log_scale else v
        v_last = float(v[-1])
        if log_scale:
            log_scale += math.log(v_last)
            v_last = 1.0
            if log_scale > _LOG_FLOOR:
                v_last, log_scale = math.exp(log_scale), 0.0
        if fixed is None:
            partial = running + np.cumsum(w)
            hit = np.nonzero(partial >= target)[0]
            if hit.size:
                blocks.append(w[: hit[0] + 1])
                break
            chunk_sums.append(math.fsum(w))
            running = math.fsum(chunk_sums)
        blocks.append(w)
        count = stop
    else:
        if fixed is None:
            weights = np.concatenate(blocks)
            raise TruncationError(
                f"basis mass {math.fsum(weights):.15f} short of 1 - {config.tail_tol:g} "
                f"after max_terms={config.max_terms} (n={n}, x={x})"
            )

    weights = np.concatenate(blocks)
    weights.flags.writeable = False
    return WeightSlice(weights, len(weights) - 1, math.fsum(weights))


def _log_kernel(n: int, k: int, t, params: PQParams, log_prefactor: float):
    """Evaluate exp(log_prefactor) * (qt)^k (1-qt)^n_{p,q} with sign tracking."""
    p, q = params.p, params.q
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    qt = q * t_arr
    j = np.arange(n, dtype=float)[:, None]
    factors = p**j - q**j * qt[None, :]
    sign = np.prod(np.sign(factors), axis=0)
    with np.errstate(divide="ignore"):
        log_abs = np.sum(np.log(np.abs(factors)), axis=0)
        if k:
            log_abs = log_abs + k * np.log(np.abs(qt))
            sign = sign * np.sign(qt) ** k
    out = sign * np.exp(log_prefactor + log_abs)
    return out if np.ndim(t) else float(out[0])


def kernel_value(n: int, k: int, t, params: PQParams):
    """Durrmeyer kernel b_{n,k}(qt), evaluated literally (vectorised in t).

    b_{n,k}(qt) = p^-(k(n-1) + n(n-1)/2) [n+k+1 choose k] (qt)^k (1-qt)^n_{p,q}
    """
    log_c = log_pq_binomial(n + k + 1, k, params) - (
        k * (n - 1) + n * (n - 1) / 2
    ) * math.log(params.p)
    return _log_kernel(n, k, t, params, log_c)


def log_operator_prefactor(n: int, k: int, params: PQParams) -> float:
    """log of ([n+1]/p^n) (pq)^-k, the weight multiplying each kernel integral."""
    p, q = params.p, params.q
    return log_pq_integer(n + 1, params) - n * math.log(p) - k * math.log(p * q)


def normalized_kernel(n: int, k: int, t, params: PQParams):
    """([n+1]/p^n)(pq)^-k b_{n,k}(qt); integrates to 1 against d_{p,q}t.

    The prefactor is folded in before exponentiation so large k neither
    overflows (pq)^-k nor underflows the kernel.
    """
    log_c = (
        log_pq_binomial(n + k + 1, k, params)
        - (k * (n - 1) + n * (n - 1) / 2) * math.log(params.p)
        + log_operator_prefactor(n, k, params)
    )
    return _log_kernel(n, k, t, params, log_c)


def log_kernel_monomial_integral(n: int, k: int, s: int, params: PQParams) -> float:
    if s < 0 or k < 0:
        raise DomainError(f"k and s must be nonnegative, got k={k!r}, s={s!r}")
    p, q = params.p, params.q
    # [n+k+1]!/[k]! and [k+s]!/[n+k+s+1]! as range products; no large cancellation.
    up = math.fsum(log_pq_integer(m, params) for m in range(k + 1, n + k + 2))
    down = math.fsum(log_pq_integer(m, params) for m in range(k + s + 1, n + k + s + 2))
    return (
        up
        - down
        + k * math.log(p * q)
        - log_pq_integer(n + 1, params)
        + n * (s + 1) * math.log(p)
    )


def kernel_monomial_integral(n: int, k: int, s: int, params: PQParams) -> float:
    """Closed form of int_0^1 b_{n,k}(qt) t^s d_{p,q}t.

    [n+k+1]! [k+s]! / ([k]! [n+k+s+1]!) * (pq)^k / [n+1] * p^(n(s+1))
    """
    return math.exp(log_kernel_monomial_integral(n, k, s, params))


def durrmeyer_factors(n: int, s: int, ks, params: PQParams) -> np.ndarray:
    """([n+1]/p^n)(pq)^-k times the closed-form kernel integral, vectorised in k.

    Algebraically this is p^(ns) prod_{i=1..s} [k+i]/[n+k+1+i], which
    reduces to p^-s prod_{i=1..s} (1 - r^(k+i)) / (1 - r^(n+k+1+i)) with
    r = q/p; neither factorials nor powers p^k materialise.
    """
    ks = np.asarray(ks, dtype=float)
    out = np.full(ks.shape, params.p ** (-s))
    for i in range(1, s + 1):
        out = out * (_tail(ks + i, params) / _tail(n + ks + 1 + i, params))
    return out


def _check_lemma2(n: int, r: int) -> None:
    if r < 1 or r >= n:
        raise DomainError(f"need n > r >= 1, got n={n!r}, r={r!r}")


def lemma2_lhs(
    n: int, r: int, x: float, params: PQParams, config: OperatorConfig = OperatorConfig()
) -> float:
    """Truncated series sum_k [n+k choose k] x^k (1-x)^{n+1} p^((r-n)k) / [n+k]^(r falling)."""
    _check_lemma2(n, r)
    ws = mkz_weights(n, x, params, config)
    k = np.arange(ws.K + 1, dtype=float)
    p = params.p
    # p^(rk) / prod_j [n+k-j] = prod_j (1 - q/p) / (p^(n-j-1) (1 - r^(n+k-j)))
    scale = np.ones_like(k)
    for j in range(r):
        scale = scale * ((1.0 - params.ratio) / (p ** (n - j - 1) * _tail(n + k - j, params)))
    # binom x^k (1-x)^{n+1} p^{-nk} equals p^{n(n+1)/2} m_{n,k}(x)
    return p ** (n * (n + 1) / 2) * math.fsum(ws.weights * scale)


def lemma2_rhs(n: int, r: int, x: float, params: PQParams) -> float:
    """prod_{j<r} (p^(n-j) - q^(n-j) x) / [n]^(r falling) * p^((n-r)(n-r+1)/2)."""
    _check_lemma2(n, r)
    p, q = params.p, params.q
    num = 1.0
    for j in range(r):
        num *= p ** (n - j) - q ** (n - j) * x
    return num / pq_falling(n, r, params) * p ** ((n - r) * (n - r + 1) / 2)


def lemma3_check(n: int, k: int, r: int, params: PQParams) -> bool:
    """Whether 1/[n+k+r] <= 1/(q^r [n+k]) holds."""
    if n + k < 1 or r < 0:
        raise DomainError(f"need n+k >= 1 and r >= 0, got n={n}, k={k}, r={r}")
    lhs = 1.0 / pq_integer(n + k + r, params)
    rhs = 1.0 / (params.q**r * pq_integer(n + k, params))
    return lhs <= rhs

