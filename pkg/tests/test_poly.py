from fractions import Fraction

import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import monomials, polynomials, small_fractions
from oracle import from_sympy, symbols, to_sympy
from singulab import VariableCountError
from singulab.poly import (
    ANTI_GRADED_LEX,
    LocalOrder,
    Polynomial,
    evaluate,
    mono_cmp,
    partial_derivative,
    poly_add,
    poly_mul,
)
from singulab.parser import parse_polynomial

XY = ["x", "y"]
S2 = symbols(2)


def P(src, names=XY):
    return parse_polynomial(src, names).value


class TestConstruction:
    def test_zero_is_empty(self):
        assert Polynomial.zero(2).terms == ()
        assert Polynomial(2, {(1, 0): 0}).is_zero

    def test_coefficients_normalized(self):
        p = Polynomial(2, {(1, 0): Fraction(4, 6), (0, 1): 0})
        assert p.terms == (((1, 0), Fraction(2, 3)),)

    def test_terms_sorted_by_local_order(self):
        p = P("y^3 + x + 1 + x*y")
        monos = [m for m, _ in p.terms]
        assert monos == [(0, 0), (1, 0), (1, 1), (0, 3)]

    def test_bad_monomial_length(self):
        with pytest.raises(VariableCountError):
            Polynomial(2, {(1, 0, 0): 1})

    def test_negative_exponent(self):
        with pytest.raises(ValueError):
            Polynomial(2, {(-1, 0): 1})

    def test_float_coefficient_is_exact_binary_value(self):
        assert Polynomial(1, {(1,): 0.1}).leading_coefficient == Fraction(0.1)
        with pytest.raises(TypeError):
            Polynomial(1, {(1,): 1j})


class TestArithmetic:
    def test_additions(self):
        assert poly_add(P("x^2"), P("-x^2")).is_zero
        assert poly_add(P("x^4 - y^3"), P("y^3")) == P("x^4")
        assert poly_add(P("x^2 + y"), P("x^2")) == P("2*x^2 + y")

    def test_products(self):
        assert poly_mul(P("x + y"), P("x - y")) == P("x^2 - y^2")
        assert P("(x^2 + y^2)^2") == P("x^4 + 2*x^2*y^2 + y^4")
        assert poly_mul(P("x^3 + 7"), Polynomial.zero(2)).is_zero

    def test_mismatch(self):
        with pytest.raises(VariableCountError):
            P("x") + Polynomial.variable(3, 0)

    def test_scalar_ops(self):
        p = P("x + 1")
        assert 2 * p == P("2*x + 2")
        assert p - 1 == P("x")
        assert 1 - p == P("-x")
        assert p / 2 == P("x/2 + 1/2")
        with pytest.raises(ZeroDivisionError):
            p / 0

    def test_power(self):
        assert P("x + y") ** 0 == Polynomial.constant(2, 1)
        with pytest.raises(ValueError):
            P("x") ** -1

    @given(polynomials())
    def test_add_zero_round_trip(self, p):
        assert p + Polynomial.zero(2) == p

    @given(polynomials(), polynomials(), polynomials())
    def test_ring_axioms(self, p, q, r):
        assert p + q == q + p
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r

    @given(polynomials(), polynomials())
    def test_product_matches_sympy(self, p, q):
        assert p * q == from_sympy(to_sympy(p, S2) * to_sympy(q, S2), S2)

    def test_hash_consistent_with_eq(self):
        assert hash(P("x + y")) == hash(P("y + x"))
        assert len({P("x + y"), P("y + x"), P("x")}) == 2


class TestOrder:
    def test_examples(self):
        o = ANTI_GRADED_LEX
        assert mono_cmp(o, (0, 0), (1, 0)) == 1
        assert mono_cmp(o, (2, 0), (0, 3)) == 1
        assert mono_cmp(o, (1, 1), (0, 2)) == 1
        assert mono_cmp(o, (1, 1), (1, 1)) == 0

    def test_permutation(self):
        swapped = LocalOrder(permutation=(1, 0))
        assert mono_cmp(swapped, (1, 1), (0, 2)) == -1
        with pytest.raises(ValueError):
            LocalOrder(permutation=(0, 0))

    def test_length_mismatch(self):
        with pytest.raises(VariableCountError):
            mono_cmp(ANTI_GRADED_LEX, (1, 0), (1, 0, 0))

    @given(monomials(3), monomials(3), monomials(3))
    def test_total_order(self, a, b, c):
        o = ANTI_GRADED_LEX
        assert mono_cmp(o, a, b) == -mono_cmp(o, b, a)
        assert (mono_cmp(o, a, b) == 0) == (a == b)
        if mono_cmp(o, a, b) >= 0 and mono_cmp(o, b, c) >= 0:
            assert mono_cmp(o, a, c) >= 0
        assert mono_cmp(o, (0, 0, 0), a) >= 0

    @given(monomials(3), monomials(3), monomials(3))
    def test_multiplicative(self, a, b, c):
        o = ANTI_GRADED_LEX
        ac = tuple(x + y for x, y in zip(a, c))
        bc = tuple(x + y for x, y in zip(b, c))
        assert mono_cmp(o, a, b) == mono_cmp(o, ac, bc)

    def test_leading_term_and_ecart(self):
        p = P("x^2 - y^3 + x^5")
        assert p.leading_monomial == (2, 0)
        assert p.leading_coefficient == 1
        assert p.ecart() == 3


class TestCalculus:
    def test_examples(self):
        f = P("x^4 - y^3")
        assert partial_derivative(f, 0) == P("4*x^3")
        assert partial_derivative(f, 1) == P("-3*y^2")
        assert partial_derivative(P("y"), 0).is_zero

    def test_index_range(self):
        with pytest.raises(IndexError):
            P("x").derivative(2)

    @given(polynomials(n=3), st.integers(0, 2), st.integers(0, 2))
    def test_partials_commute(self, p, i, j):
        assert p.derivative(i).derivative(j) == p.derivative(j).derivative(i)

    @given(polynomials(), st.integers(0, 1))
    def test_derivative_matches_sympy(self, p, i):
        assert p.derivative(i) == from_sympy(sympy.diff(to_sympy(p, S2), S2[i]), S2)

    @given(polynomials(max_deg=3), polynomials(max_deg=2), polynomials(max_deg=2))
    def test_compose_matches_sympy(self, p, a, b):
        expected = to_sympy(p, S2).subs({S2[0]: to_sympy(a, S2), S2[1]: to_sympy(b, S2)}, simultaneous=True)
        assert p.compose([a, b]) == from_sympy(expected, S2)

    @given(polynomials(), small_fractions, small_fractions)
    def test_shift(self, p, a, b):
        q = p.shift([a, b])
        assert q(Fraction(0), Fraction(0)) == p(a, b)
        assert q(Fraction(1), Fraction(-1)) == p(a + 1, b - 1)


class TestEvaluate:
    def test_examples(self):
        f = P("x^4 - y^3")
        assert evaluate(f, [1, 1]) == 0
        assert evaluate(f, [0, 0]) == 0
        assert evaluate(P("x^2 + y^2"), [3, 4]) == 25

    def test_exact_rational(self):
        assert evaluate(P("x^2 + y"), [Fraction(1, 3), Fraction(1, 9)]) == Fraction(2, 9)

    def test_length_mismatch(self):
        with pytest.raises(VariableCountError):
            evaluate(P("x"), [1, 2, 3])

    @given(polynomials(max_deg=6, max_terms=8), st.floats(-2, 2), st.floats(-2, 2))
    def test_float_close_to_exact(self, p, a, b):
        exact = evaluate(p, [Fraction(a), Fraction(b)])
        scale = sum(abs(float(c)) * 2.0 ** sum(m) for m, c in p.terms) or 1.0
        assert abs(evaluate(p, [a, b]) - float(exact)) <= 1e-14 * scale

    def test_compensated_cancellation(self):
        # (x - 1)^8 expanded near its root: naive Horner loses every digit
        p = P("(x - 1)^8 + 0*y")
        x = 1 + 2.0 ** -10
        assert evaluate(p, [x, 0.0]) == pytest.approx(2.0 ** -80, rel=1e-6)


class TestPrinting:
    def test_to_str(self):
        assert P("x^4 - y^3").to_str(XY) == "x^4 - y^3"
        assert P("1/2*x + 3").to_str(XY) == "1/2*x + 3"
        assert Polynomial.zero(2).to_str(XY) == "0"

    @given(polynomials(n=3))
    def test_round_trip(self, p):
        names = ["x", "y", "z"]
        assert parse_polynomial(p.to_str(names), names).value == p

    def test_components_and_truncate(self):
        p = P("x^4 + y^4 + 2*x^2*y^2 + 2*y^6")
        assert p.homogeneous_component(4) == P("(x^2 + y^2)^2")
        assert p.truncate(5) == P("(x^2 + y^2)^2")
        assert set(p.homogeneous_components()) == {4, 6}
        assert p.low_degree == 4 and p.degree == 6
        assert not p.is_homogeneous() and P("(x + y)^3").is_homogeneous()
