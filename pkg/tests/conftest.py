import os
import sys
from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from singulab.poly import Polynomial  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_fractions = st.fractions(min_value=-9, max_value=9, max_denominator=5)


def monomials(n, max_deg=4):
    return st.lists(st.integers(0, max_deg), min_size=n, max_size=n).map(tuple).filter(
        lambda m: sum(m) <= max_deg
    )


@st.composite
def polynomials(draw, n=2, max_deg=4, max_terms=5):
    terms = draw(st.dictionaries(monomials(n, max_deg), small_fractions, max_size=max_terms))
    return Polynomial(n, terms)


@st.composite
def unimodular(draw, n):
    """Rational matrix with determinant 1: a product of elementary shears."""
    M = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for _ in range(draw(st.integers(1, 4))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1).filter(lambda j: j != i))
        c = draw(st.fractions(min_value=-3, max_value=3, max_denominator=3))
        M = [[M[r][k] + (c * M[j][k] if r == i else 0) for k in range(n)] for r in range(n)]
    return M


def linear_substitution(M):
    n = len(M)
    gens = Polynomial.gens(n)
    out = []
    for row in M:
        p = Polynomial.zero(n)
        for c, g in zip(row, gens):
            p = p + g.scale(c)
        out.append(p)
    return out
