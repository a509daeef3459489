import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import assume, given, strategies as st

from conftest import linear_substitution, polynomials, small_fractions, unimodular
from singulab import INFINITE, PreconditionError, VariableCountError
from singulab.germ import (
    LimitKind,
    alpha_derivative,
    alpha_directional_derivative,
    initial_part,
    order_at,
)
from singulab.parser import parse_polynomial
from singulab.poly import Polynomial

XY = ["x", "y"]


def P(src):
    return parse_polynomial(src, XY).value


class TestOrder:
    def test_examples(self):
        assert order_at(P("x^4 - y^3")) == 3
        assert order_at(P("x^3 + y^3")) == 3
        assert order_at(P("y")) == 1

    def test_nonvanishing_base_point(self):
        assert order_at(P("x^2 + y"), [1, 0]) == 0

    def test_shifted_point(self):
        # (x - 1)^2 y at (1, 0): lowest degree of the centred expansion is 3
        assert order_at(P("(x - 1)^2*y"), [1, 0]) == 3

    def test_zero(self):
        assert order_at(Polynomial.zero(2)) == INFINITE

    def test_point_length(self):
        with pytest.raises(VariableCountError):
            order_at(P("x"), [0, 0, 0])

    @given(polynomials(), polynomials())
    def test_additive_on_products(self, f, g):
        assume(not f.is_zero and not g.is_zero)
        assert order_at(f * g) == order_at(f) + order_at(g)


class TestInitialPart:
    def test_examples(self):
        assert initial_part(P("x^4 + y^4 + 2*(x^2*y^2 + y^6)")) == P("(x^2 + y^2)^2")
        assert initial_part(P("x^4 - y^3")) == P("-y^3")
        for k in (1, 2, 3):
            assert initial_part(P(f"x^4 + 2*x^2*y^2 + y^4 + y^{k + 5}")) == P("(x^2 + y^2)^2")

    def test_constant_when_nonvanishing(self):
        assert initial_part(P("x + 3")) == Polynomial.constant(2, 3)

    def test_centered_coordinates(self):
        assert initial_part(P("(x - 1)^2 + y^3"), [1, 0]) == P("x^2")

    def test_zero_rejected(self):
        with pytest.raises(PreconditionError):
            initial_part(Polynomial.zero(2))

    @given(polynomials(max_deg=4), unimodular(2))
    def test_linear_equivariance(self, f, M):
        assume(not f.is_zero)
        L = linear_substitution(M)
        g = f.compose(L)
        assert order_at(g) == order_at(f)
        assert initial_part(g) == initial_part(f).compose(L)


class TestDirectional:
    f = P("x^4 - y^3")

    def test_limit(self):
        r = alpha_directional_derivative(self.f, [0, 0], [0, 1], 3)
        assert r.kind is LimitKind.LIMIT and r.value == -1

    def test_zero_along_x(self):
        assert alpha_directional_derivative(self.f, [0, 0], [1, 0], 3).kind is LimitKind.ZERO

    def test_diverges(self):
        assert alpha_directional_derivative(self.f, [0, 0], [0, 1], 4).kind is LimitKind.DIVERGES

    def test_alpha_below_ray_degree_is_zero(self):
        # -t^3 / t^2 = -t -> 0 along (0, 1)
        assert alpha_directional_derivative(self.f, [0, 0], [0, 1], 2).kind is LimitKind.ZERO

    def test_fractional_alpha(self):
        assert alpha_directional_derivative(self.f, [0, 0], [0, 1], Fraction(7, 2)).kind is LimitKind.DIVERGES
        assert alpha_directional_derivative(self.f, [0, 0], [1, 0], Fraction(7, 2)).kind is LimitKind.ZERO

    @pytest.mark.parametrize("v", [(0, 1), (1, 0), (1, 2), (-3, 1)])
    @pytest.mark.parametrize("alpha", [1, 2, Fraction(5, 2), 3, 4, 5])
    def test_against_sympy_limit(self, v, alpha):
        t = sympy.Symbol("t", positive=True)
        ray = (t * v[0]) ** 4 - (t * v[1]) ** 3
        lim = sympy.limit(ray / t ** sympy.Rational(alpha.numerator, alpha.denominator)
                          if isinstance(alpha, Fraction) else ray / t ** alpha, t, 0, "+")
        r = alpha_directional_derivative(self.f, [0, 0], list(v), alpha)
        if lim.is_infinite:
            assert r.kind is LimitKind.DIVERGES
        elif lim == 0:
            assert r.kind is LimitKind.ZERO
        else:
            assert r.kind is LimitKind.LIMIT and r.value == lim

    def test_zero_direction(self):
        with pytest.raises(ValueError):
            alpha_directional_derivative(self.f, [0, 0], [0, 0], 1)

    def test_expansion_oracle(self):
        # direct expansion of f(t v) along v = (1, 2): t^4 - 8 t^3
        r = alpha_directional_derivative(self.f, [0, 0], [1, 2], 3)
        assert r.kind is LimitKind.LIMIT and r.value == -8


class TestAlphaDerivative:
    f = P("x^4 - y^3")

    def test_below_order(self):
        r = alpha_derivative(self.f, alpha=2)
        assert r.exists and r.value.is_zero

    def test_at_order(self):
        assert alpha_derivative(self.f, alpha=3).value == P("-y^3")

    def test_above_order(self):
        r = alpha_derivative(self.f, alpha=4)
        assert not r.exists
        # the directional oracle diverges along (0, 1)
        assert alpha_directional_derivative(self.f, [0, 0], [0, 1], 4).kind is LimitKind.DIVERGES

    def test_non_integer_below(self):
        assert alpha_derivative(self.f, alpha=Fraction(3, 2)).value.is_zero

    def test_constant_germ(self):
        r = alpha_derivative(Polynomial.constant(2, 5), alpha=7)
        assert r.exists and r.value.is_zero

    @given(polynomials(max_deg=4), st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=4),
           small_fractions, small_fractions)
    def test_homogeneity(self, f, lam, a, b):
        assume(not f.is_zero and f.constant_term() == 0)
        m = order_at(f)
        r = alpha_derivative(f, alpha=m)
        assert r.value == initial_part(f)
        H = r.value
        assert H(lam * a, lam * b) == lam ** m * H(a, b)

    def test_negative_alpha(self):
        with pytest.raises(ValueError):
            alpha_derivative(self.f, alpha=-1)


def test_infinite_is_math_inf():
    assert INFINITE == math.inf
