"""Real functions on [0, 1/p] used as operator inputs.

Polynomials keep their ascending coefficient list so the operator can take
the closed-form monomial route instead of numerical integration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as P


@dataclass(frozen=True)
class Function1D:
    func: Callable[[np.ndarray], np.ndarray]
    name: Optional[str] = None
    coeffs: Optional[tuple[float, ...]] = None

    def __call__(self, t):
        return self.func(t)

    @property
    def is_polynomial(self) -> bool:
        return self.coeffs is not None

    @property
    def degree(self) -> int:
        if self.coeffs is None:
            raise TypeError(f"{self.name or 'function'} is not a polynomial")
        return len(self.coeffs) - 1


def polynomial(coeffs: Sequence[float], name: Optional[str] = None) -> Function1D:
    """Polynomial with ascending coefficients ``c0 + c1 t + ...``."""
    c = tuple(float(v) for v in coeffs) or (0.0,)
    arr = np.array(c)
    return Function1D(lambda t: P.polyval(np.asarray(t, dtype=float), arr), name, c)


def monomial(i: int) -> Function1D:
    """e_i(t) = t^i."""
    return polynomial([0.0] * i + [1.0], name=f"e{i}")


def constant(c: float) -> Function1D:
    return polynomial([c], name=f"const({c:g})")


def from_roots(roots: Sequence[Fraction], name: Optional[str] = None) -> Function1D:
    """Monic polynomial prod (t - r), expanded in exact rational arithmetic."""
    coeffs = [Fraction(1)]
    for r in roots:
        shifted = [Fraction(0)] + coeffs
        for i, c in enumerate(coeffs):
            shifted[i] -= r * c
        coeffs = shifted
    return polynomial([float(c) for c in coeffs], name=name)


def lincomb(a: float, f: Function1D, b: float, g: Function1D) -> Function1D:
    """a*f + b*g, staying polynomial when both inputs are."""
    name = f"{a:g}*{f.name}+{b:g}*{g.name}"
    if f.is_polynomial and g.is_polynomial:
        c = P.polyadd(a * np.array(f.coeffs), b * np.array(g.coeffs))
        return polynomial(c, name=name)
    return Function1D(lambda t: a * f(t) + b * g(t), name=name)


_F = Fraction
TEST_POLYNOMIALS: dict[str, Function1D] = {
    "quadratic": from_roots([_F(2, 3), _F(4, 5)], name="quadratic"),
    "cubic": from_roots([_F(1, 4), _F(2, 3), _F(4, 5)], name="cubic"),
    "quartic": from_roots([_F(1, 3), _F(2, 3), _F(3, 5), _F(4, 5)], name="quartic"),
    "quintic": from_roots(
        [_F(1, 3), _F(2, 3), _F(3, 5), _F(4, 5), _F(5, 7)], name="quintic"
    ),
}

ROOTS_LABEL = {
    "quadratic": "(x-2/3)(x-4/5)",
    "cubic": "(x-1/4)(x-2/3)(x-4/5)",
    "quartic": "(x-1/3)(x-2/3)(x-3/5)(x-4/5)",
    "quintic": "(x-1/3)(x-2/3)(x-3/5)(x-4/5)(x-5/7)",
}

# Non-polynomial inputs; these force the numerical-integration route.
NAMED_NONPOLY: dict[str, Function1D] = {
    "sqrt": Function1D(lambda t: np.sqrt(np.abs(np.asarray(t, dtype=float))), "sqrt"),
    "abs_half": Function1D(lambda t: np.abs(np.asarray(t, dtype=float) - 0.5), "abs_half"),
    "exp": Function1D(lambda t: np.exp(np.asarray(t, dtype=float)), "exp"),
}


def parse_function(text: str) -> Function1D:
    """Resolve a CLI function name: a registered name, ``e<i>``, or ``poly:c0,c1,...``."""
    if text.startswith("poly:"):
        body = text[len("poly:"):]
        coeffs = [float(v) for v in body.split(",") if v.strip()]
        if not coeffs:
            raise ValueError(f"empty coefficient list in {text!r}")
        return polynomial(coeffs, name=text)
    if text in TEST_POLYNOMIALS:
        return TEST_POLYNOMIALS[text]
    if text in NAMED_NONPOLY:
        return NAMED_NONPOLY[text]
    if text.startswith("e") and text[1:].isdigit():
        return monomial(int(text[1:]))
    known = sorted(TEST_POLYNOMIALS) + sorted(NAMED_NONPOLY) + ["e<i>", "poly:c0,c1,..."]
    raise ValueError(f"unknown function {text!r}; expected one of {', '.join(known)}")
