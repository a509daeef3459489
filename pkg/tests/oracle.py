"""Independent reference computations built on sympy.

Nothing here touches the package's own standard-basis or elimination code:
Milnor numbers come from global Groebner bases of J(f) + m^D, whose quotient
is supported at the origin and so equals the local quotient.
"""

import itertools
from fractions import Fraction

import sympy

from singulab.poly import Polynomial


def symbols(n):
    return sympy.symbols(f"v0:{n}")


def to_sympy(p: Polynomial, syms):
    expr = sympy.Integer(0)
    for m, c in p.terms:
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(syms, m):
            term *= s ** e
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, syms) -> Polynomial:
    poly = sympy.Poly(sympy.expand(expr), *syms)
    return Polynomial(len(syms), {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()})


def _monomials(n, D):
    return [m for m in itertools.product(range(D), repeat=n) if sum(m) < D]


def quotient_dim(f: Polynomial, D: int) -> int:
    """dim Q[x] / (J(f) + m^D) via a grevlex Groebner basis."""
    syms = symbols(f.nvars)
    fs = to_sympy(f, syms)
    gens = [sympy.diff(fs, s) for s in syms]
    gens = [g for g in gens if g != 0]
    gens += [sympy.prod(s ** e for s, e in zip(syms, m))
             for m in itertools.product(range(D + 1), repeat=f.nvars) if sum(m) == D]
    G = sympy.groebner(gens, *syms, order="grevlex")
    leads = [sympy.Poly(g, *syms).monoms(order="grevlex")[0] for g in G.exprs]
    return sum(1 for m in _monomials(f.nvars, D)
               if not any(all(a >= b for a, b in zip(m, l)) for l in leads))


def milnor(f: Polynomial, D_max: int = 16):
    """mu(f) once two consecutive truncations agree, else None."""
    prev = None
    for D in range(1, D_max + 1):
        d = quotient_dim(f, D)
        if d == prev:
            return d
        prev = d
    return None
