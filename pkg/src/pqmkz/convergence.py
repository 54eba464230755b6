"""Parameter sequences, moduli of continuity, error bounds and natural density.

The moduli are grid estimates: x and the step h run over uniform grids, so
the returned value never exceeds the true supremum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .functions import Function1D
from .mkz import OperatorConfig
from .operator import apply, central_moment, moments
from .pq_core import DomainError, PQParams, pq_integer

GRID_SIZE = 2001
H_SIZE = 512
THM53_SLACK = 1.05


@dataclass(frozen=True)
class SeqScheme:
    """n -> (p_n, q_n), with a = lim p_n^n and b = lim q_n^n."""

    rule: Callable[[int], PQParams]
    a: float
    b: float
    name: str = "custom"

    def __call__(self, n: int) -> PQParams:
        return self.rule(n)


def remark1_scheme(c_p: float = 3.0, c_q: float = 2.0) -> SeqScheme:
    """p_n = 1 - 1/(c_p n), q_n = 1 - 1/(c_q n); needs c_p > c_q > 0."""
    if not (c_p > c_q > 0):
        raise DomainError(f"need c_p > c_q > 0 so that q_n < p_n, got c_p={c_p}, c_q={c_q}")

    def rule(n: int) -> PQParams:
        if n < 1:
            raise DomainError(f"scheme index must be >= 1, got {n!r}")
        return PQParams(1.0 - 1.0 / (c_p * n), 1.0 - 1.0 / (c_q * n))

    return SeqScheme(rule, math.exp(-1.0 / c_p), math.exp(-1.0 / c_q), f"remark1({c_p:g},{c_q:g})")


def _h_grid(hmax: float, h_size: int) -> np.ndarray:
    return hmax * np.arange(1, h_size + 1) / h_size


def _sup_over_steps(diff, hs: np.ndarray, span: int, grid_size: int) -> float:
    """max over h in hs and x in linspace(0, 1 - span*h) of |diff(x, h)|."""
    best = 0.0
    u = np.linspace(0.0, 1.0, grid_size)
    for block in np.array_split(hs, max(1, len(hs) // 32)):
        h = block[:, None]
        x = u[None, :] * (1.0 - span * h)
        best = max(best, float(np.max(np.abs(diff(x, h)))))
    return best


def modulus(
    f: Function1D, delta: float, grid_size: int = GRID_SIZE, h_size: int = H_SIZE
) -> float:
    """omega(f, delta) = sup_{0<h<=delta} sup_{x, x+h in [0,1]} |f(x+h) - f(x)|."""
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta!r}")
    if grid_size < 2:
        raise DomainError(f"grid_size must be >= 2, got {grid_size!r}")
    if delta == 0:
        return 0.0
    hs = _h_grid(min(delta, 1.0), h_size)
    return _sup_over_steps(lambda x, h: f(x + h) - f(x), hs, 1, grid_size)


def modulus2(
    f: Function1D, delta: float, grid_size: int = GRID_SIZE, h_size: int = H_SIZE
) -> float:
    """Second-order modulus: sup |f(x+2h) - 2f(x+h) + f(x)| over 0<h<=delta.

    x is constrained so that x + 2h stays in [0, 1].
    """
    if delta < 0:
        raise DomainError(f"delta must be nonnegative, got {delta!r}")
    if grid_size < 2:
        raise DomainError(f"grid_size must be >= 2, got {grid_size!r}")
    if delta == 0:
        return 0.0
    hs = _h_grid(min(delta, 0.5), h_size)
    return _sup_over_steps(lambda x, h: f(x + 2 * h) - 2 * f(x + h) + f(x), hs, 2, grid_size)


def shift_point(n: int, x: float, params: PQParams) -> float:
    """x/q + (p^n - q^n x)/(q^2 [n]): where the auxiliary operator moves e_1."""
    p, q = params.p, params.q
    return x / q + (p**n - q**n * x) / (q**2 * pq_integer(n, params))


def alpha_n(n: int, x: float, scheme: SeqScheme) -> float:
    return shift_point(n, x, scheme(n)) - x


def delta_n(
    n: int,
    x: float,
    scheme: SeqScheme,
    config: OperatorConfig = OperatorConfig(),
    literal: bool = False,
) -> float:
    """sqrt(M((t-x)^2; x) + alpha_n(x)^2).

    With ``literal=True`` the unsquared first central moment is used in
    place of alpha_n^2; the result is NaN if that sum is negative.
    """
    params = scheme(n)
    psi2 = central_moment(2, n, x, params, config)
    if literal:
        v = psi2 + central_moment(1, n, x, params, config)
        return math.sqrt(v) if v >= 0 else math.nan
    return math.sqrt(max(psi2, 0.0) + alpha_n(n, x, scheme) ** 2)


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    holds: bool
    details: dict = field(default_factory=dict)


def _deviation(f: Function1D, n: int, x: float, scheme: SeqScheme, config: OperatorConfig):
    """|M(f; x) - f(x)| and the truncation bound on the computed operator value.

    The bound checks compare lhs against rhs + tail, so a series cut at
    mass 1 - tail_tol cannot fail an inequality whose right side is zero.
    """
    res = apply(f, n, x, scheme(n), config)
    return abs(res.value - float(f(np.array([x]))[0])), res.tail_bound


def error_bound_check(
    f: Function1D,
    n: int,
    x: float,
    scheme: SeqScheme,
    config: OperatorConfig = OperatorConfig(),
    C: float = 4.0,
    grid_size: int = GRID_SIZE,
    h_size: int = H_SIZE,
) -> BoundCheck:
    """|M f - f|(x) against C omega_2(f, delta_n(x)) + omega(f, alpha_n(x)).

    ``details["c_min"]`` is the smallest C for which the inequality would
    hold at this point (0 when the omega term alone covers it).
    """
    if not C > 0:
        raise DomainError(f"C must be positive, got {C!r}")
    lhs, tail = _deviation(f, n, x, scheme, config)
    d = delta_n(n, x, scheme, config)
    a = abs(alpha_n(n, x, scheme))
    w2 = modulus2(f, d, grid_size, h_size)
    w1 = modulus(f, a, grid_size, h_size)
    rhs = C * w2 + w1
    excess = lhs - w1 - tail
    if excess <= 0:
        c_min = 0.0
    else:
        c_min = excess / w2 if w2 > 0 else math.inf
    details = {"delta_n": d, "alpha_n": a, "omega2": w2, "omega": w1, "c_min": c_min, "tail_bound": tail}
    return BoundCheck(lhs, rhs, lhs <= rhs + tail, details)


def theorem53_check(
    f: Function1D,
    n: int,
    x: float,
    scheme: SeqScheme,
    config: OperatorConfig = OperatorConfig(),
    grid_size: int = GRID_SIZE,
    h_size: int = H_SIZE,
) -> BoundCheck:
    """|M f - f|(x) against 2 omega(f, sqrt(M((t-x)^2; x))), with 5% grid slack."""
    lhs, tail = _deviation(f, n, x, scheme, config)
    root = math.sqrt(max(central_moment(2, n, x, scheme(n), config), 0.0))
    w = modulus(f, root, grid_size, h_size)
    rhs = 2.0 * w * THM53_SLACK
    return BoundCheck(lhs, rhs, lhs <= rhs + tail, {"sqrt_delta_n": root, "omega": w, "tail_bound": tail})


def uniform_grid(size: int = 100, margin: float = 0.01) -> np.ndarray:
    """size points spanning [0, 1 - margin]."""
    if margin < 0.01:
        raise DomainError(f"grid margin must be >= 0.01, got {margin!r}")
    return np.linspace(0.0, 1.0 - margin, size)


def _check_grid(grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or grid.min() < 0 or grid.max() > 0.99:
        raise DomainError("sup_error grid must lie in [0, 0.99]")
    return grid


def sup_error(
    f: Function1D,
    n: int,
    scheme: SeqScheme,
    config: OperatorConfig = OperatorConfig(),
    grid: Sequence[float] | None = None,
) -> float:
    """max over the grid of |M(f; x) - f(x)|."""
    grid = _check_grid(uniform_grid() if grid is None else grid)
    params = scheme(n)
    fx = f(grid)
    return max(
        abs(apply(f, n, float(x), params, config).value - float(v)) for x, v in zip(grid, fx)
    )


def moment_sup_error(
    i: int, n: int, scheme: SeqScheme, config: OperatorConfig = OperatorConfig(), grid=None
) -> float:
    """sup_x |M(e_i; x) - x^i| over the grid, for i in {0, 1, 2}."""
    grid = _check_grid(uniform_grid() if grid is None else grid)
    params = scheme(n)
    return max(abs(moments(n, float(x), params, config)[i] - float(x) ** i) for x in grid)


@dataclass(frozen=True)
class DensityReport:
    N: int
    violator_count: int
    density: float
    profile: tuple[tuple[int, float], ...]


def profile_points(N: int) -> list[int]:
    """1, 2, 5, 10, 20, 50, ... up to N, always ending at N."""
    pts = []
    decade = 1
    while decade <= N:
        for m in (1, 2, 5):
            if m * decade <= N:
                pts.append(m * decade)
        decade *= 10
    if pts[-1] != N:
        pts.append(N)
    return pts


def natural_density(indicator: Callable[[int], bool], N: int) -> DensityReport:
    """Empirical density |S ∩ {1..N}| / N, with the running profile."""
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N!r}")
    marks = set(profile_points(N))
    count = 0
    profile = []
    for j in range(1, N + 1):
        if indicator(j):
            count += 1
        if j in marks:
            profile.append((j, count / j))
    return DensityReport(N, count, count / N, tuple(profile))


def st_convergence_check(
    seq: Callable[[int], float], L: float, eps: float, N: int
) -> DensityReport:
    """Density of the violator set {n <= N : |x_n - L| >= eps}."""
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    return natural_density(lambda j: abs(seq(j) - L) >= eps, N)


def scheme_sequences(scheme: SeqScheme) -> dict[str, tuple[Callable[[int], float], float]]:
    """The four scheme sequences and their limits: p_n, q_n -> 1, p_n^n -> a, q_n^n -> b."""
    return {
        "p_n": (lambda n: scheme(n).p, 1.0),
        "q_n": (lambda n: scheme(n).q, 1.0),
        "p_n^n": (lambda n: scheme(n).p ** n, scheme.a),
        "q_n^n": (lambda n: scheme(n).q ** n, scheme.b),
    }
