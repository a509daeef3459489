"""Milnor numbers via standard bases in the local ring at the origin.

The Milnor number of f is the dimension of the local algebra
``Q[x]_(x) / J(f)``.  It is computed from a standard basis of the Jacobian
ideal under a local degree ordering, using Mora's normal form with ecart.
An independent oracle counts the same dimension from truncated Macaulay
matrices.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .base import INFINITE, ResourceLimitError, VariableCountError
from .poly import (
    ANTI_GRADED_LEX,
    LocalOrder,
    Monomial,
    Polynomial,
    mono_divides,
    mono_lcm,
)

DEFAULT_MAX_STEPS = 10**6

#: Returned by :func:`milnor_number_oracle` when truncation never stabilizes.
INCONCLUSIVE = "inconclusive"


def default_max_steps() -> int:
    value = os.environ.get("SINGULAB_MAX_STEPS")
    return int(value) if value else DEFAULT_MAX_STEPS


@dataclass(frozen=True)
class Ideal:
    generators: Tuple[Polynomial, ...]
    nvars: int

    def __post_init__(self):
        gens = tuple(self.generators)
        for g in gens:
            if g.nvars != self.nvars:
                raise VariableCountError("generator lives in a different ring")
            if g.is_zero:
                raise ValueError("ideal generators must be nonzero")
        object.__setattr__(self, "generators", gens)

    @property
    def is_empty(self) -> bool:
        return not self.generators


def jacobian_ideal(f: Polynomial) -> Ideal:
    """The ideal of partial derivatives of f, with zero partials dropped."""
    return Ideal(tuple(d for d in f.gradient() if not d.is_zero), f.nvars)


# ---------------------------------------------------------------------------
# Mora normal form on raw term dictionaries

class _Steps:
    __slots__ = ("count", "limit")

    def __init__(self, limit):
        self.count = 0
        self.limit = limit

    def tick(self):
        self.count += 1
        if self.limit is not None and self.count > self.limit:
            raise ResourceLimitError(self.count, self.limit)


class _Elem:
    """A polynomial as a term dict, with cached leading monomial and ecart."""

    __slots__ = ("terms", "lm", "ecart")

    def __init__(self, terms: dict, key):
        self.terms = terms
        if terms:
            self.lm = max(terms, key=key)
            self.ecart = max(sum(m) for m in terms) - sum(self.lm)
        else:
            self.lm = None
            self.ecart = 0


def _sub_multiple(h: dict, c: Fraction, shift: Monomial, g: dict, cut=None) -> dict:
    # h - c * x^shift * g, dropping terms of degree >= cut
    out = dict(h)
    base = sum(shift)
    for m, a in g.items():
        if cut is not None and base + sum(m) >= cut:
            continue
        mm = tuple(x + y for x, y in zip(m, shift))
        v = out.get(mm, 0) - c * a
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def _reduce_by(h: _Elem, g: _Elem, key, cut=None) -> _Elem:
    shift = tuple(x - y for x, y in zip(h.lm, g.lm))
    c = h.terms[h.lm] / g.terms[g.lm]
    return _Elem(_sub_multiple(h.terms, c, shift, g.terms, cut), key)


def _truncate(h: _Elem, cut, key) -> _Elem:
    if cut is None or not h.terms:
        return h
    if sum(h.lm) >= cut:
        return _Elem({}, key)
    if sum(h.lm) + h.ecart >= cut:
        return _Elem({m: c for m, c in h.terms.items() if sum(m) < cut}, key)
    return h


def _mora_nf(h: _Elem, basis: List[_Elem], key, steps: _Steps, cut=None) -> _Elem:
    """Mora's weak normal form with ecart.

    Among reducers whose leading monomial divides LM(h) the one of least
    ecart is chosen, ties going to the earliest in the reducer list.  When
    the chosen reducer has larger ecart than h, h itself joins the reducer
    list (this is what guarantees termination for local orders).

    ``cut`` is a degree D with m^D inside the ideal; terms of degree >= D are
    then discarded, which keeps the computation finite dimensional.
    """
    h = _truncate(h, cut, key)
    reducers = list(basis)
    while h.terms:
        best = None
        for g in reducers:
            if mono_divides(g.lm, h.lm) and (best is None or g.ecart < best.ecart):
                best = g
                if g.ecart == 0:
                    break
        if best is None:
            break
        steps.tick()
        if best.ecart > h.ecart:
            reducers.append(h)
        h = _reduce_by(h, best, key, cut)
    return h


def _spoly(f: _Elem, g: _Elem, key) -> _Elem:
    lcm = mono_lcm(f.lm, g.lm)
    sf = tuple(x - y for x, y in zip(lcm, f.lm))
    sg = tuple(x - y for x, y in zip(lcm, g.lm))
    cf = 1 / f.terms[f.lm]
    cg = 1 / g.terms[g.lm]
    left = {tuple(x + y for x, y in zip(m, sf)): cf * a for m, a in f.terms.items()}
    return _Elem(_sub_multiple(left, cg, sg, g.terms), key)


def _to_elem(p: Polynomial, key) -> _Elem:
    return _Elem(dict(p.terms), key)


def _to_poly(e: _Elem, nvars: int) -> Polynomial:
    return Polynomial(nvars, e.terms)


def mora_normal_form(p: Polynomial, basis: Sequence[Polynomial], order: LocalOrder = ANTI_GRADED_LEX,
                     max_steps: Optional[int] = None) -> Polynomial:
    """Weak normal form of p with respect to ``basis`` in the local ring.

    The result r satisfies ``u*p - r in <basis>`` for some unit u, and either
    r = 0 or LM(r) is not divisible by any leading monomial of ``basis``.
    """
    for b in basis:
        if b.nvars != p.nvars:
            raise VariableCountError("basis element lives in a different ring")
        if b.is_zero:
            raise ValueError("basis elements must be nonzero")
    key = order.key
    elems = [_to_elem(b, key) for b in basis]
    steps = _Steps(max_steps if max_steps is not None else default_max_steps())
    return _to_poly(_mora_nf(_to_elem(p, key), elems, key, steps), p.nvars)


# ---------------------------------------------------------------------------
# standard bases

@dataclass(frozen=True)
class StandardBasis:
    order: LocalOrder
    elements: Tuple[Polynomial, ...]
    leading_monomials: Tuple[Monomial, ...]
    nvars: int
    steps: int = 0

    def normal_form(self, p: Polynomial) -> Polynomial:
        return mora_normal_form(p, self.elements, self.order)

    def is_complete(self) -> bool:
        """Check that every S-polynomial of the basis reduces to zero."""
        key = self.order.key
        elems = [_to_elem(e, key) for e in self.elements]
        steps = _Steps(None)
        for f, g in itertools.combinations(elems, 2):
            if _mora_nf(_spoly(f, g, key), elems, key, steps).terms:
                return False
        return True


def _pair_key(f: _Elem, g: _Elem):
    return sum(mono_lcm(f.lm, g.lm))


def standard_basis(ideal: Ideal, order: LocalOrder = ANTI_GRADED_LEX,
                   max_steps: Optional[int] = None) -> StandardBasis:
    """Standard basis of ``ideal`` in the localization at the origin.

    Pairs are processed lowest lcm degree first.  Pairs with coprime leading
    monomials are skipped (product criterion) and the Gebauer-Moeller chain
    criterion prunes redundant pairs.  Once the leading monomials contain every
    monomial of some degree D (the ideal then contains m^D), all later work is
    done modulo m^D, which stops the tails and coefficients from growing.  Exceeding ``max_steps`` reduction steps
    raises :class:`ResourceLimitError`; the result is never silently truncated.
    """
    key = order.key
    limit = max_steps if max_steps is not None else default_max_steps()
    steps = _Steps(limit)
    basis: List[_Elem] = []
    pairs: list = []
    counter = itertools.count()
    cut = None

    def add(h: _Elem):
        nonlocal cut
        # keep coefficients tame: make h monic
        lc = h.terms[h.lm]
        if lc != 1:
            h = _Elem({m: c / lc for m, c in h.terms.items()}, key)
        j = len(basis)
        for i, g in enumerate(basis):
            heapq.heappush(pairs, (_pair_key(g, h), next(counter), i, j))
        basis.append(h)
        new_cut = _corner_degree([e.lm for e in basis], ideal.nvars)
        if new_cut is not None and (cut is None or new_cut < cut):
            cut = new_cut
            for i, e in enumerate(basis):
                # an element lying in m^cut is replaced by its leading monomial
                basis[i] = _Elem({e.lm: 1}, key) if sum(e.lm) >= cut else _truncate(e, cut, key)

    for gen in ideal.generators:
        h = _mora_nf(_to_elem(gen, key), basis, key, steps, cut)
        if h.terms:
            add(h)

    done = set()
    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        f, g = basis[i], basis[j]
        done.add((i, j))
        lcm = mono_lcm(f.lm, g.lm)
        if all(a == 0 or b == 0 for a, b in zip(f.lm, g.lm)):
            continue
        if _chain_redundant(i, j, lcm, basis, done):
            continue
        h = _mora_nf(_spoly(f, g, key), basis, key, steps, cut)
        if h.terms:
            add(h)

    keep = _minimal_indices(basis)
    elems = tuple(_to_poly(basis[i], ideal.nvars) for i in keep)
    return StandardBasis(order, elems, tuple(basis[i].lm for i in keep), ideal.nvars, steps.count)


def _corner_degree(leading: Sequence[Monomial], nvars: int) -> Optional[int]:
    # least D such that every monomial of degree >= D is a multiple of a
    # leading monomial, or None while some variable has no pure power
    bounds = pure_power_bounds(leading, nvars)
    if any(b is None for b in bounds):
        return None
    return max((sum(m) + 1 for m in staircase(leading, bounds)), default=0)


def _chain_redundant(i, j, lcm, basis, done) -> bool:
    # Buchberger's second criterion: some k with LM(k) | lcm(i, j) whose pairs
    # with i and j have already been treated.
    for k, e in enumerate(basis):
        if k in (i, j) or not mono_divides(e.lm, lcm):
            continue
        ik = (min(i, k), max(i, k))
        jk = (min(j, k), max(j, k))
        if ik in done and jk in done:
            return True
    return False


def _minimal_indices(basis: List[_Elem]) -> List[int]:
    keep = []
    for i, e in enumerate(basis):
        redundant = False
        for j, o in enumerate(basis):
            if j == i or not mono_divides(o.lm, e.lm):
                continue
            if o.lm != e.lm or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(i)
    return keep


# ---------------------------------------------------------------------------
# Milnor number

class CertificateKind(enum.Enum):
    STAIRCASE_CLOSED = "StaircaseClosed"
    MISSING_PURE_POWER = "MissingPurePower"


@dataclass(frozen=True)
class Certificate:
    kind: CertificateKind
    variable: Optional[int] = None

    def __str__(self):
        if self.kind is CertificateKind.MISSING_PURE_POWER:
            return f"{self.kind.value}({self.variable})"
        return self.kind.value


@dataclass(frozen=True)
class MilnorResult:
    value: object  # int or INFINITE
    standard_monomials: Optional[Tuple[Monomial, ...]]
    certificate: Certificate
    basis: Optional[StandardBasis] = field(default=None, compare=False, repr=False)

    @property
    def is_finite(self) -> bool:
        return self.value != INFINITE


def pure_power_bounds(leading: Sequence[Monomial], nvars: int) -> List[Optional[int]]:
    """For each variable, the least k with x_i^k among ``leading`` (None if absent)."""
    bounds: List[Optional[int]] = [None] * nvars
    for m in leading:
        support = [i for i, e in enumerate(m) if e]
        if not support:
            return [0] * nvars
        if len(support) == 1:
            i = support[0]
            if bounds[i] is None or m[i] < bounds[i]:
                bounds[i] = m[i]
    return bounds


def staircase(leading: Sequence[Monomial], bounds: Sequence[int]) -> Tuple[Monomial, ...]:
    """Monomials inside the box ``bounds`` not divisible by any leading monomial."""
    out = []
    for m in itertools.product(*(range(b) for b in bounds)):
        if not any(mono_divides(l, m) for l in leading):
            out.append(m)
    return tuple(sorted(out, key=ANTI_GRADED_LEX.key, reverse=True))


def milnor_from_basis(sb: StandardBasis) -> MilnorResult:
    bounds = pure_power_bounds(sb.leading_monomials, sb.nvars)
    for i, b in enumerate(bounds):
        if b is None:
            return MilnorResult(INFINITE, None, Certificate(CertificateKind.MISSING_PURE_POWER, i), sb)
    monos = staircase(sb.leading_monomials, bounds)
    return MilnorResult(len(monos), monos, Certificate(CertificateKind.STAIRCASE_CLOSED), sb)


def milnor_number(f: Polynomial, order: LocalOrder = ANTI_GRADED_LEX,
                  max_steps: Optional[int] = None) -> MilnorResult:
    """Milnor number of f at the origin: dim of the local algebra modulo J(f)."""
    J = jacobian_ideal(f)
    sb = standard_basis(J, order, max_steps)
    return milnor_from_basis(sb)


def is_algebraically_isolated(f: Polynomial, max_steps: Optional[int] = None) -> bool:
    return milnor_number(f, max_steps=max_steps).is_finite


# ---------------------------------------------------------------------------
# truncation oracle (no standard bases involved)

def _monomials_below(nvars: int, D: int) -> List[Monomial]:
    out = []
    for d in range(D):
        for c in itertools.combinations_with_replacement(range(nvars), d):
            m = [0] * nvars
            for i in c:
                m[i] += 1
            out.append(tuple(m))
    return out


def truncated_quotient_dimension(f: Polynomial, D: int) -> int:
    """dim Q[x] / (J(f) + m^D), by exact elimination on a Macaulay matrix.

    Rows are x^b * df/dx_i truncated to total degree < D; the answer is the
    number of monomials of degree < D minus the rank.
    """
    if D < 1:
        raise ValueError("D must be at least 1")
    n = f.nvars
    monos = _monomials_below(n, D)
    index = {m: k for k, m in enumerate(monos)}
    partials = [d for d in f.gradient() if not d.is_zero]
    pivots: dict = {}
    for d in partials:
        low = d.low_degree
        for b in monos:
            if sum(b) + low >= D:
                continue
            row = {}
            for m, c in d.terms:
                mm = tuple(x + y for x, y in zip(m, b))
                if sum(mm) < D:
                    row[index[mm]] = c
            _insert_row(row, pivots)
    return len(monos) - len(pivots)


def _insert_row(row: dict, pivots: dict):
    while row:
        col = min(row)
        piv = pivots.get(col)
        if piv is None:
            c = row[col]
            pivots[col] = {k: v / c for k, v in row.items()}
            return
        c = row[col]
        for k, v in piv.items():
            nv = row.get(k, 0) - c * v
            if nv:
                row[k] = nv
            else:
                row.pop(k, None)


def milnor_number_oracle(f: Polynomial, D_max: int = 16, window: int = 2):
    """Milnor number from stabilization of the truncated quotient dimensions.

    Returns the common value once ``window`` consecutive truncation degrees
    give the same dimension, or :data:`INCONCLUSIVE` if that never happens up
    to ``D_max``.  Two equal consecutive values already force stabilization
    (Nakayama), so ``window = 2`` is sound.
    """
    if window < 2:
        raise ValueError("window must be at least 2")
    run_value, run_length = None, 0
    for D in range(1, D_max + 1):
        d = truncated_quotient_dimension(f, D)
        if d == run_value:
            run_length += 1
        else:
            run_value, run_length = d, 1
        if run_length >= window:
            return d
    return INCONCLUSIVE
