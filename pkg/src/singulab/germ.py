"""Order, initial part and alpha-derivatives of polynomial germs at a point.

Everything here is exact: the germ at ``x0`` is handled by expanding
``f(x0 + y)`` in the centered coordinates ``y``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .base import INFINITE, PreconditionError, VariableCountError
from .poly import Polynomial


def _centered(f: Polynomial, x0) -> Polynomial:
    if x0 is None:
        return f
    if len(x0) != f.nvars:
        raise VariableCountError(f"point has {len(x0)} coordinates, expected {f.nvars}")
    return f.shift(x0)


def order_at(f: Polynomial, x0: Optional[Sequence] = None):
    """Order of the germ of f at x0 (the origin by default).

    Returns 0 when f(x0) != 0, the lowest total degree of f(x0 + .) otherwise,
    and ``INFINITE`` for the zero polynomial.
    """
    g = _centered(f, x0)
    if g.is_zero:
        return INFINITE
    return g.low_degree


def initial_part(f: Polynomial, x0: Optional[Sequence] = None) -> Polynomial:
    """Lowest-degree homogeneous component of f(x0 + .), in centered coordinates.

    When f(x0) != 0 this is the constant f(x0).
    """
    g = _centered(f, x0)
    if g.is_zero:
        raise PreconditionError("the zero polynomial has no initial part")
    return g.homogeneous_component(g.low_degree)


def _increment(f: Polynomial, x0) -> Polynomial:
    # f(x0 + y) - f(x0)
    g = _centered(f, x0)
    return g - g.constant_term()


class LimitKind(enum.Enum):
    LIMIT = "limit"
    ZERO = "zero"
    DIVERGES = "diverges"


@dataclass(frozen=True)
class DirectionalLimit:
    kind: LimitKind
    value: Optional[Fraction] = None


def _ray_expansion(f: Polynomial, x0, v) -> dict:
    """Coefficients of t -> f(x0 + t v) - f(x0) as {power: coefficient}."""
    g = _increment(f, x0)
    v = [Fraction(a) for a in v]
    coeffs: dict = {}
    for m, c in g.terms:
        d = sum(m)
        term = c
        for a, e in zip(v, m):
            if e:
                term *= a ** e
        if term:
            coeffs[d] = coeffs.get(d, 0) + term
    return {d: c for d, c in coeffs.items() if c}


def alpha_directional_derivative(f: Polynomial, x0, v, alpha) -> DirectionalLimit:
    """Limit of (f(x0 + t v) - f(x0)) / t^alpha as t -> 0+."""
    if len(v) != f.nvars:
        raise VariableCountError(f"direction has {len(v)} coordinates, expected {f.nvars}")
    if not any(Fraction(a) for a in v):
        raise ValueError("direction must be nonzero")
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    coeffs = _ray_expansion(f, x0 if x0 is not None else [0] * f.nvars, v)
    if not coeffs:
        return DirectionalLimit(LimitKind.ZERO)
    d = min(coeffs)
    if d > alpha:
        return DirectionalLimit(LimitKind.ZERO)
    if d == alpha:
        return DirectionalLimit(LimitKind.LIMIT, coeffs[d])
    return DirectionalLimit(LimitKind.DIVERGES)


@dataclass(frozen=True)
class AlphaDerivative:
    """Result of an alpha-derivative computation.

    ``value`` is the homogeneous map H (possibly zero) when it exists and
    ``None`` otherwise.
    """

    alpha: Fraction
    value: Optional[Polynomial]

    @property
    def exists(self) -> bool:
        return self.value is not None


def alpha_derivative(f: Polynomial, x0: Optional[Sequence] = None, alpha=1) -> AlphaDerivative:
    """The homogeneous degree-alpha map H with f(x0 + tv) - f(x0) = t^alpha H(v) + o(t^alpha)."""
    alpha = Fraction(alpha)
    if alpha < 0:
        raise ValueError("alpha must be non-negative")
    g = _increment(f, x0)
    if g.is_zero:
        return AlphaDerivative(alpha, Polynomial.zero(f.nvars))
    m = g.low_degree
    if alpha < m:
        return AlphaDerivative(alpha, Polynomial.zero(f.nvars))
    if alpha == m:
        return AlphaDerivative(alpha, g.homogeneous_component(m))
    return AlphaDerivative(alpha, None)
