"""Exact sparse multivariate polynomials over the rationals.

Monomials are plain tuples of non-negative exponents.  A :class:`Polynomial`
keeps its terms sorted under the anti-graded lexicographic local order, so
the first stored term is the leading term used by local division.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Optional, Sequence, Tuple

from .base import VariableCountError

Monomial = Tuple[int, ...]


# ---------------------------------------------------------------------------
# monomials

def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_div(a: Monomial, b: Monomial) -> Monomial:
    """Return a / b; the caller guarantees that b divides a."""
    return tuple(x - y for x, y in zip(a, b))


def mono_divides(b: Monomial, a: Monomial) -> bool:
    """True if b divides a."""
    return all(y <= x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _local_key(m: Monomial):
    return (-sum(m), m)


@dataclass(frozen=True)
class LocalOrder:
    """Anti-graded lexicographic order on monomials.

    ``a > b`` iff ``deg(a) < deg(b)``, with ties broken lexicographically on
    the (optionally permuted) exponent vectors.  The constant monomial is the
    largest monomial, which makes this a local ordering.
    """

    kind: str = "anti_graded_lex"
    permutation: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind != "anti_graded_lex":
            raise ValueError(f"unsupported local order kind {self.kind!r}")
        if self.permutation is not None:
            perm = tuple(self.permutation)
            if sorted(perm) != list(range(len(perm))):
                raise ValueError(f"{perm!r} is not a permutation")
            object.__setattr__(self, "permutation", perm)

    def key(self, m: Monomial):
        """Sort key; larger key means larger monomial."""
        if self.permutation is None:
            return (-sum(m), m)
        if len(m) != len(self.permutation):
            raise VariableCountError("monomial length does not match the order's permutation")
        return (-sum(m), tuple(m[i] for i in self.permutation))

    def cmp(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def leading_term(self, p: "Polynomial") -> Tuple[Monomial, Fraction]:
        if p.is_zero:
            raise ValueError("the zero polynomial has no leading term")
        if self.permutation is None:
            return p._terms[0]
        return max(p._terms, key=lambda t: self.key(t[0]))


ANTI_GRADED_LEX = LocalOrder()


def mono_cmp(order: LocalOrder, a: Monomial, b: Monomial) -> int:
    """Compare two monomials: 1 if a > b, 0 if equal, -1 if a < b."""
    if len(a) != len(b):
        raise VariableCountError(f"monomials of length {len(a)} and {len(b)}")
    return order.cmp(tuple(a), tuple(b))


# ---------------------------------------------------------------------------
# polynomials

def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, float):
        # exact binary value; callers wanting decimals should pass strings
        return Fraction(c)
    raise TypeError(f"cannot use {type(c).__name__} as an exact coefficient")


class Polynomial:
    """An immutable polynomial in ``nvars`` variables with rational coefficients.

    ``terms`` is accepted either as a mapping ``{exponents: coefficient}`` or
    as an iterable of ``(exponents, coefficient)`` pairs; repeated monomials
    are merged and zero coefficients dropped.
    """

    __slots__ = ("nvars", "_terms", "_map", "_hash")

    def __init__(self, nvars: int, terms: Mapping | Iterable = ()):
        if nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for mono, coeff in items:
            mono = tuple(int(e) for e in mono)
            if len(mono) != nvars:
                raise VariableCountError(f"monomial {mono} has {len(mono)} exponents, expected {nvars}")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            acc[mono] = acc.get(mono, 0) + _as_fraction(coeff)
        self._init(nvars, {m: c for m, c in acc.items() if c})

    def _init(self, nvars, mapping):
        self.nvars = nvars
        self._map = mapping
        self._terms = tuple(sorted(mapping.items(), key=lambda t: _local_key(t[0]), reverse=True))
        self._hash = None

    @classmethod
    def _from_clean(cls, nvars: int, mapping: dict) -> "Polynomial":
        # mapping already has Fraction values and no zeros
        p = cls.__new__(cls)
        p._init(nvars, mapping)
        return p

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._from_clean(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        c = _as_fraction(c)
        return cls._from_clean(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        return cls._from_clean(nvars, {tuple(int(j == i) for j in range(nvars)): Fraction(1)})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff=1) -> "Polynomial":
        return cls(len(exponents), {tuple(exponents): coeff})

    @classmethod
    def gens(cls, nvars: int):
        return tuple(cls.variable(nvars, i) for i in range(nvars))

    # inspection -------------------------------------------------------------
    @property
    def terms(self) -> Tuple[Tuple[Monomial, Fraction], ...]:
        """Terms sorted from largest to smallest monomial in the local order."""
        return self._terms

    def as_dict(self) -> dict:
        return dict(self._map)

    @property
    def is_zero(self) -> bool:
        return not self._map

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._map)

    def __len__(self):
        return len(self._map)

    def __iter__(self):
        return iter(self._terms)

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self._map.get(tuple(mono), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._map.get((0,) * self.nvars, Fraction(0))

    @property
    def leading_monomial(self) -> Monomial:
        return self._terms[0][0]

    @property
    def leading_coefficient(self) -> Fraction:
        return self._terms[0][1]

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self._map), default=-1)

    @property
    def low_degree(self):
        """Lowest total degree of a term; ``math.inf`` for zero."""
        if not self._map:
            return math.inf
        return sum(self._terms[0][0])

    def ecart(self) -> int:
        return self.degree - sum(self._terms[0][0])

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._map}) <= 1

    def homogeneous_component(self, d: int) -> "Polynomial":
        return Polynomial._from_clean(self.nvars, {m: c for m, c in self._map.items() if sum(m) == d})

    def homogeneous_components(self) -> dict:
        parts: dict = {}
        for m, c in self._map.items():
            parts.setdefault(sum(m), {})[m] = c
        return {d: Polynomial._from_clean(self.nvars, parts[d]) for d in sorted(parts)}

    def truncate(self, k: int) -> "Polynomial":
        """Drop all terms of total degree greater than k."""
        return Polynomial._from_clean(self.nvars, {m: c for m, c in self._map.items() if sum(m) <= k})

    # arithmetic -------------------------------------------------------------
    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise VariableCountError(f"{self.nvars} vs {other.nvars} variables")

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Rational)):
            return Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._map)
        for m, c in other._map.items():
            s = acc.get(m, 0) + c
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
        return Polynomial._from_clean(self.nvars, acc)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._from_clean(self.nvars, {m: -c for m, c in self._map.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c, mono: Optional[Monomial] = None) -> "Polynomial":
        """Return c * x^mono * self."""
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        if mono is None or not any(mono):
            return Polynomial._from_clean(self.nvars, {m: c * a for m, a in self._map.items()})
        return Polynomial._from_clean(
            self.nvars, {mono_mul(m, mono): c * a for m, a in self._map.items()}
        )

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc: dict = {}
        for ma, ca in self._map.items():
            for mb, cb in other._map.items():
                m = tuple(x + y for x, y in zip(ma, mb))
                acc[m] = acc.get(m, 0) + ca * cb
        return Polynomial._from_clean(self.nvars, {m: c for m, c in acc.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if not other:
                raise ZeroDivisionError("polynomial division by zero")
            return self.scale(Fraction(1) / _as_fraction(other))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomials only take non-negative integer powers")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self._map == other._map
        if isinstance(other, (int, Rational)):
            return self._map == Polynomial.constant(self.nvars, other)._map
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._map.items())))
        return self._hash

    # calculus and substitution ----------------------------------------------
    def derivative(self, i: int) -> "Polynomial":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        acc = {}
        for m, c in self._map.items():
            e = m[i]
            if e:
                acc[m[:i] + (e - 1,) + m[i + 1:]] = c * e
        return Polynomial._from_clean(self.nvars, acc)

    def gradient(self):
        return [self.derivative(i) for i in range(self.nvars)]

    def compose(self, substitutions: Sequence["Polynomial"]) -> "Polynomial":
        """Return self(q_1, ..., q_n); the q_i may live in a different ring."""
        if len(substitutions) != self.nvars:
            raise VariableCountError(f"need {self.nvars} substitutions, got {len(substitutions)}")
        target = substitutions[0].nvars
        for q in substitutions:
            if q.nvars != target:
                raise VariableCountError("substitutions live in different rings")
        powers = [dict() for _ in substitutions]

        def power(i, e):
            cache = powers[i]
            if e not in cache:
                cache[e] = substitutions[i] ** e
            return cache[e]

        result = Polynomial.zero(target)
        for m, c in self._map.items():
            term = Polynomial.constant(target, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def shift(self, point: Sequence) -> "Polynomial":
        """Return the polynomial y -> self(point + y), expanded exactly."""
        if len(point) != self.nvars:
            raise VariableCountError(f"point has {len(point)} coordinates, expected {self.nvars}")
        point = [_as_fraction(a) for a in point]
        if not any(point):
            return self
        gens = Polynomial.gens(self.nvars)
        return self.compose([g + a for g, a in zip(gens, point)])

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return evaluate(self, point)

    # printing ---------------------------------------------------------------
    def to_str(self, names: Optional[Sequence[str]] = None) -> str:
        if names is None:
            names = default_names(self.nvars)
        if len(names) != self.nvars:
            raise VariableCountError("wrong number of variable names")
        if not self._map:
            return "0"
        pieces = []
        for m, c in sorted(self._map.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True):
            factors = [n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e]
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.to_str()!r})"


def default_names(n: int):
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


# ---------------------------------------------------------------------------
# functional surface

def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    p._check(q)
    return p * q


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    """Formal partial derivative in variable ``i`` (0-based)."""
    return p.derivative(i)


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


_SPLITTER = 134217729.0  # 2**27 + 1


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, al * bl - (((p - ah * bh) - al * bh) - ah * bl)


def _comp_horner(coeffs, x):
    """Compensated Horner evaluation; coeffs are highest degree first."""
    s = coeffs[0]
    c = 0.0
    for a in coeffs[1:]:
        p, pi = _two_prod(s, x)
        s, sigma = _two_sum(p, a)
        c = c * x + (pi + sigma)
    return s + c


def _eval_float(terms, point, var):
    # terms: list of (monomial, float coefficient); Horner in `var`, recursing on the rest
    if var == len(point) - 1:
        by_exp = {}
        for m, c in terms:
            by_exp[m[var]] = by_exp.get(m[var], 0.0) + c
    else:
        groups: dict = {}
        for m, c in terms:
            groups.setdefault(m[var], []).append((m, c))
        by_exp = {e: _eval_float(g, point, var + 1) for e, g in groups.items()}
    top = max(by_exp)
    coeffs = [by_exp.get(e, 0.0) for e in range(top, -1, -1)]
    return _comp_horner(coeffs, float(point[var]))


def evaluate(p: Polynomial, point: Sequence):
    """Evaluate p at a point.

    Rational points (ints or Fractions) give an exact Fraction; any float
    coordinate switches to compensated Horner evaluation in floating point.
    """
    if len(point) != p.nvars:
        raise VariableCountError(f"point has {len(point)} coordinates, expected {p.nvars}")
    if all(isinstance(a, (int, Rational)) for a in point):
        point = [Fraction(a) for a in point]
        total = Fraction(0)
        for m, c in p._map.items():
            t = c
            for a, e in zip(point, m):
                if e:
                    t *= a ** e
            total += t
        return total
    if p.is_zero:
        return 0.0
    return _eval_float([(m, float(c)) for m, c in p._map.items()], point, 0)
