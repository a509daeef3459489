"""Expression trees for real maps R^n -> R^p, evaluated with numpy.

Rational powers with odd denominators are real roots, so that
``x^(p/q) = sign(x)^p * |x|^(p/q)``; even-denominator roots of negative
numbers, division by zero and negative powers of zero evaluate to NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np

from ..base import INFINITE, DomainError, VariableCountError
from ..poly import Polynomial


class Node:
    __slots__ = ()

    def __add__(self, other):
        return Add(self, _wrap(other))

    def __radd__(self, other):
        return Add(_wrap(other), self)

    def __sub__(self, other):
        return Sub(self, _wrap(other))

    def __rsub__(self, other):
        return Sub(_wrap(other), self)

    def __mul__(self, other):
        return Mul(self, _wrap(other))

    def __rmul__(self, other):
        return Mul(_wrap(other), self)

    def __truediv__(self, other):
        return Div(self, _wrap(other))

    def __neg__(self):
        return Neg(self)

    def __pow__(self, exponent):
        return Pow(self, Fraction(exponent))


def _wrap(value) -> Node:
    if isinstance(value, Node):
        return value
    return Const(Fraction(value))


@dataclass(frozen=True)
class Const(Node):
    value: Fraction


@dataclass(frozen=True)
class Var(Node):
    index: int


@dataclass(frozen=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True)
class Add(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Sub(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Mul(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Div(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: Fraction


@dataclass(frozen=True)
class Abs(Node):
    arg: Node


# ---------------------------------------------------------------------------
# evaluation

def real_power(base: np.ndarray, exponent: Fraction) -> np.ndarray:
    p, q = exponent.numerator, exponent.denominator
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if q == 1:
            if p >= 0:
                return base ** p
            out = np.where(base == 0, np.nan, 1.0 / np.where(base == 0, 1.0, base) ** (-p))
            return out
        mag = np.abs(base) ** (p / q)
        if p < 0:
            mag = np.where(base == 0, np.nan, mag)
        if q % 2:
            sign = np.sign(base) if p % 2 else 1.0
            return sign * mag
        return np.where(base < 0, np.nan, mag)


def eval_node(node: Node, X: np.ndarray) -> np.ndarray:
    """Evaluate ``node`` on the rows of ``X`` (shape (N, n))."""
    if isinstance(node, Var):
        return X[:, node.index]
    if isinstance(node, Const):
        return np.full(X.shape[0], float(node.value))
    if isinstance(node, Neg):
        return -eval_node(node.arg, X)
    if isinstance(node, Abs):
        return np.abs(eval_node(node.arg, X))
    if isinstance(node, Pow):
        return real_power(eval_node(node.base, X), node.exponent)
    a = eval_node(node.left, X)
    b = eval_node(node.right, X)
    if isinstance(node, Add):
        return a + b
    if isinstance(node, Sub):
        return a - b
    if isinstance(node, Mul):
        return a * b
    if isinstance(node, Div):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(b == 0, np.nan, a / np.where(b == 0, 1.0, b))
    raise TypeError(f"unknown node {node!r}")


def substitute(node: Node, replacements: Sequence[Node]) -> Node:
    if isinstance(node, Var):
        return replacements[node.index]
    if isinstance(node, Const):
        return node
    if isinstance(node, (Neg, Abs)):
        return type(node)(substitute(node.arg, replacements))
    if isinstance(node, Pow):
        return Pow(substitute(node.base, replacements), node.exponent)
    return type(node)(substitute(node.left, replacements), substitute(node.right, replacements))


def polynomial_node(p: Polynomial) -> Node:
    out = None
    for m, c in p.terms:
        term: Node = Const(abs(c))
        factors = [Var(i) if e == 1 else Pow(Var(i), Fraction(e)) for i, e in enumerate(m) if e]
        if factors:
            term = factors[0] if abs(c) == 1 else Mul(term, factors[0])
            for f in factors[1:]:
                term = Mul(term, f)
        if out is None:
            out = Neg(term) if c < 0 else term
        else:
            out = Sub(out, term) if c < 0 else Add(out, term)
    return Const(Fraction(0)) if out is None else out


# ---------------------------------------------------------------------------
# smoothness lower bound

def smoothness_class(node: Node, x0: Sequence[float], tol: float = 1e-12):
    """A conservative lower bound for the C^k class of ``node`` near x0.

    Returns ``INFINITE`` for expressions built from smooth operations away
    from singular points; a fractional power r of a subexpression vanishing
    at x0 caps the class at floor(r), absolute values and divisions by a
    vanishing quantity cap it at 0.
    """
    X = np.asarray(x0, dtype=float).reshape(1, -1)

    def vanishes(sub):
        v = eval_node(sub, X)[0]
        return not np.isfinite(v) or abs(v) <= tol

    def walk(n):
        if isinstance(n, (Var, Const)):
            return INFINITE
        if isinstance(n, Neg):
            return walk(n.arg)
        if isinstance(n, Abs):
            inner = walk(n.arg)
            return min(inner, 0) if vanishes(n.arg) else inner
        if isinstance(n, Pow):
            inner = walk(n.base)
            r = n.exponent
            if r.denominator == 1 and r >= 0:
                return inner
            if not vanishes(n.base):
                return inner
            if r < 0:
                return min(inner, 0)
            return min(inner, math.floor(r))
        left, right = walk(n.left), walk(n.right)
        if isinstance(n, Div) and vanishes(n.right):
            return min(left, right, 0)
        return min(left, right)

    return walk(node)


# ---------------------------------------------------------------------------
# maps

@dataclass(frozen=True)
class MapExpr:
    """A map R^n -> R^p given by one expression tree per output coordinate."""

    components: Tuple[Node, ...]
    variables: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "variables", tuple(self.variables))
        if not self.components:
            raise ValueError("a map needs at least one component")

    @property
    def n_inputs(self) -> int:
        return len(self.variables)

    @property
    def n_outputs(self) -> int:
        return len(self.components)

    @classmethod
    def from_polynomial(cls, p: Polynomial, variables: Sequence[str] = None) -> "MapExpr":
        from ..poly import default_names

        names = tuple(variables) if variables is not None else default_names(p.nvars)
        if len(names) != p.nvars:
            raise VariableCountError("wrong number of variable names")
        return cls((polynomial_node(p),), names)

    @classmethod
    def from_polynomials(cls, ps: Sequence[Polynomial], variables: Sequence[str] = None) -> "MapExpr":
        from ..poly import default_names

        names = tuple(variables) if variables is not None else default_names(ps[0].nvars)
        return cls(tuple(polynomial_node(p) for p in ps), names)

    @classmethod
    def identity(cls, variables: Sequence[str]) -> "MapExpr":
        return cls(tuple(Var(i) for i in range(len(variables))), variables)

    def __call__(self, points) -> np.ndarray:
        """Evaluate on an (N, n) array, returning (N, p); a single point gives (p,)."""
        X = np.asarray(points, dtype=float)
        single = X.ndim == 1
        if single:
            X = X.reshape(1, -1)
        if X.shape[1] != self.n_inputs:
            raise VariableCountError(f"points have {X.shape[1]} coordinates, expected {self.n_inputs}")
        out = np.column_stack([eval_node(c, X) for c in self.components])
        return out[0] if single else out

    def evaluate_strict(self, point) -> np.ndarray:
        value = self(point)
        if not np.all(np.isfinite(value)):
            raise DomainError(f"map undefined at {tuple(np.ravel(point))}")
        return value

    def compose(self, inner: "MapExpr") -> "MapExpr":
        """self o inner."""
        if inner.n_outputs != self.n_inputs:
            raise VariableCountError(
                f"cannot compose: inner map has {inner.n_outputs} outputs, outer takes {self.n_inputs}"
            )
        return MapExpr(tuple(substitute(c, inner.components) for c in self.components), inner.variables)

    def smoothness_class(self, x0: Sequence[float]):
        return min(smoothness_class(c, x0) for c in self.components)

    def to_str(self) -> str:
        from ..parser import format_node

        return "; ".join(format_node(c, self.variables) for c in self.components)

    def __str__(self):
        return self.to_str()

