from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import polynomials
from singulab.numeric.expr import Abs, Add, Const, Div, MapExpr, Mul, Neg, Pow, Sub, Var
from singulab.parser import ParseError, format_node, parse_map, parse_polynomial, split_names
from singulab.poly import Polynomial

XY = ["x", "y"]
XYZ = ["x", "y", "z"]


class TestPolynomialMode:
    def test_cusp(self):
        r = parse_polynomial("x^4 - y^3", XY)
        assert len(r.value.terms) == 2 and r.variables == ("x", "y") and r.diagnostics == []
        assert r.value.as_dict() == {(4, 0): 1, (0, 3): -1}

    def test_family_member(self):
        p = parse_polynomial("x^4 + y^4 + 2*(x^2*y^2 + y^6)", XY).value
        assert p.as_dict() == {(4, 0): 1, (0, 4): 1, (2, 2): 2, (0, 6): 2}

    @pytest.mark.parametrize("src,expected", [
        ("2x y", {(1, 1): 2}),
        ("(x + y)(x - y)", {(2, 0): 1, (0, 2): -1}),
        ("  -x ^ 2 +y", {(2, 0): -1, (0, 1): 1}),
        ("x/2 + 3/4*y", {(1, 0): Fraction(1, 2), (0, 1): Fraction(3, 4)}),
        ("1.5*x", {(1, 0): Fraction(3, 2)}),
        ("x^0", {(0, 0): 1}),
        ("(x^2)^3", {(6, 0): 1}),
        ("+x - x", {}),
    ])
    def test_grammar(self, src, expected):
        assert parse_polynomial(src, XY).value.as_dict() == expected

    def test_power_binds_tighter_than_minus(self):
        assert parse_polynomial("-x^2", XY).value == -parse_polynomial("x^2", XY).value

    def test_longer_names(self):
        p = parse_polynomial("x1^2 + x2^2 - x3^2", ["x1", "x2", "x3"]).value
        assert p.as_dict() == {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): -1}


class TestErrors:
    @pytest.mark.parametrize("src,pos,msg", [
        ("x^(1/2)", 2, "fractional exponent requires map mode"),
        ("x + w", 4, "unknown variable 'w'"),
        ("x + * y", 4, "unexpected '*'"),
        ("(x + y", 6, "expected ')'"),
        ("x^-1", 2, "expected an integer"),
        ("x^(-1)", 2, "negative exponent requires map mode"),
        ("x / y", 4, "division by a non-constant requires map mode"),
        ("x / 0", 4, "division by zero"),
        ("abs(x)", 0, "absolute value requires map mode"),
        ("x; y", 1, "requires map mode"),
        ("x $ y", 2, "unexpected character '$'"),
        ("", 0, "unexpected 'end of input'"),
    ])
    def test_positioned(self, src, pos, msg):
        with pytest.raises(ParseError) as err:
            parse_polynomial(src, XY)
        assert err.value.position == pos
        assert msg in err.value.message
        assert err.value.source == src

    def test_is_value_error(self):
        with pytest.raises(ValueError):
            parse_polynomial("x +", XY)

    @pytest.mark.parametrize("names", [[], ["x", "x"], ["1x"], ["x-y"]])
    def test_bad_names(self, names):
        with pytest.raises(ValueError):
            parse_polynomial("1", names)

    def test_split_names(self):
        assert split_names("x, y ,z") == ("x", "y", "z")
        with pytest.raises(ValueError):
            split_names("x,x")


class TestMapMode:
    def test_components(self):
        m = parse_map("x; x^(4/3) - y", XY).value
        assert m.n_inputs == 2 and m.n_outputs == 2
        assert m.components[0] == Var(0)
        assert m.components[1] == Sub(Pow(Var(0), Fraction(4, 3)), Var(1))

    def test_abs_forms(self):
        a = parse_map("abs(x - y)", XY).value.components[0]
        b = parse_map("|x - y|", XY).value.components[0]
        assert a == b == Abs(Sub(Var(0), Var(1)))

    def test_evaluates(self):
        m = parse_map("x/|x|^(1/2); y^(-2)", XY).value
        out = m(np.array([[-4.0, 0.5]]))[0]
        assert np.allclose(out, [-2.0, 4.0])

    def test_constants_fold(self):
        assert parse_map("2*3 - 1/2", XY).value.components[0] == Const(Fraction(11, 2))

    def test_polynomial_agrees_with_map_mode(self):
        src = "x^4 - 3/2*x*y^2 + (y - 1)^3"
        p = parse_polynomial(src, XY).value
        m = parse_map(src, XY).value
        pts = np.random.default_rng(2).uniform(-2, 2, (30, 2))
        assert np.allclose(m(pts)[:, 0], MapExpr.from_polynomial(p, XY)(pts)[:, 0], rtol=1e-12)

    def test_empty_component(self):
        with pytest.raises(ParseError) as err:
            parse_map("x;", XY)
        assert err.value.position == 2


# ---------------------------------------------------------------------------
# round trips

@settings(max_examples=200)
@given(polynomials(n=3, max_deg=5, max_terms=7))
def test_polynomial_round_trip(p):
    assert parse_polynomial(p.to_str(XYZ), XYZ).value == p


def _leaves():
    consts = st.fractions(min_value=0, max_value=20, max_denominator=6).map(Const)
    return st.one_of(st.integers(0, 1).map(Var), consts)


def _extend(children):
    exps = st.fractions(min_value=-3, max_value=4, max_denominator=5).filter(lambda e: e != 0)
    return st.one_of(
        st.tuples(children, children).map(lambda ab: Add(*ab)),
        st.tuples(children, children).map(lambda ab: Sub(*ab)),
        st.tuples(children, children).map(lambda ab: Mul(*ab)),
        st.tuples(children, children).filter(lambda ab: ab[1] != Const(Fraction(0))).map(lambda ab: Div(*ab)),
        children.map(Neg),
        children.map(Abs),
        st.tuples(children, exps).map(lambda be: Pow(*be)),
    )


nodes = st.recursive(_leaves(), _extend, max_leaves=8)


@settings(max_examples=200)
@given(st.lists(nodes, min_size=1, max_size=3))
def test_map_round_trip(comps):
    m = MapExpr(tuple(comps), XY)
    once = parse_map(m.to_str(), XY).value
    # parsing folds constant subexpressions, after which printing is a fixed point
    assert parse_map(once.to_str(), XY).value == once
    pts = np.random.default_rng(0).uniform(-2, 2, (8, 2))
    with np.errstate(all="ignore"):
        a, b = m(pts), once(pts)
    assert np.allclose(a, b, rtol=1e-9, atol=1e-9, equal_nan=True)


def test_format_node_examples():
    assert format_node(Sub(Pow(Var(0), Fraction(4, 3)), Var(1)), XY) == "x^(4/3) - y"
    assert format_node(Mul(Const(Fraction(-2)), Var(0)), XY) == "(-2)*x"
    assert parse_polynomial(Polynomial.zero(2).to_str(XY), XY).value.is_zero
