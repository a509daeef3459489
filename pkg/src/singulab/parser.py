"""Recursive descent parser for polynomial and map expressions.

Grammar (whitespace is insignificant)::

    map      := expr (';' expr)*                 (map mode only)
    expr     := ['+' | '-'] term (('+' | '-') term)*
    term     := factor (['*' | '/'] factor)*     juxtaposition multiplies
    factor   := base ['^' exponent]
    base     := number | name | '(' expr ')' | 'abs' '(' expr ')' | '|' expr '|'
    exponent := integer | '(' ['-'] integer ['/' integer] ')'

Polynomial mode only accepts non-negative integer exponents and division by
constants; map mode also allows rational and negative exponents, division
and absolute values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Sequence, Tuple, Union

from .base import SingulabError
from .numeric.expr import Abs, Add, Const, Div, MapExpr, Mul, Neg, Node, Pow, Sub, Var
from .poly import Polynomial

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z][A-Za-z0-9]*)|(?P<op>[-+*/^()|;]))"
)


class ParseError(SingulabError, ValueError):
    def __init__(self, position: int, message: str, source: str = ""):
        self.position = position
        self.message = message
        self.source = source
        super().__init__(f"at position {position}: {message}")


@dataclass
class ParseResult:
    value: Union[Polynomial, MapExpr]
    variables: Tuple[str, ...]
    diagnostics: List[Tuple[int, str]] = field(default_factory=list)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(src: str) -> List[_Tok]:
    toks = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(src, pos)
        if not m:
            bad = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise ParseError(bad, f"unexpected character {src[bad]!r}", src)
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


def _fold(node: Node) -> Node:
    """Fold operations on constants so printed constants re-parse identically."""
    if isinstance(node, Neg) and isinstance(node.arg, Const):
        return Const(-node.arg.value)
    if isinstance(node, Pow) and isinstance(node.base, Const) and node.exponent.denominator == 1:
        if node.base.value or node.exponent >= 0:
            return Const(node.base.value ** int(node.exponent))
    if isinstance(node, (Add, Sub, Mul, Div)):
        a, b = node.left, node.right
        if isinstance(a, Const) and isinstance(b, Const):
            if isinstance(node, Add):
                return Const(a.value + b.value)
            if isinstance(node, Sub):
                return Const(a.value - b.value)
            if isinstance(node, Mul):
                return Const(a.value * b.value)
            if b.value:
                return Const(a.value / b.value)
    return node


def _is_constant(node: Node) -> bool:
    return isinstance(node, Const)


class _Parser:
    def __init__(self, src: str, names: Sequence[str], mode: str):
        self.src = src
        self.toks = _tokenize(src)
        self.i = 0
        self.index = {n: k for k, n in enumerate(names)}
        self.mode = mode

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg, pos=None):
        raise ParseError(self.tok.pos if pos is None else pos, msg, self.src)

    def accept(self, text) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")

    # grammar ----------------------------------------------------------------
    def parse_map(self) -> List[Node]:
        comps = [self.expr()]
        while self.accept(";"):
            comps.append(self.expr())
        self.finish()
        return comps

    def parse_single(self) -> Node:
        node = self.expr()
        self.finish()
        return node

    def finish(self):
        if self.tok.kind != "end":
            if self.tok.text == ";" and self.mode == "polynomial":
                self.error("';' separates map components and requires map mode")
            self.error(f"unexpected {self.tok.text!r}")

    def expr(self) -> Node:
        neg = False
        if self.accept("-"):
            neg = True
        else:
            self.accept("+")
        node = self.term()
        if neg:
            node = _fold(Neg(node))
        while True:
            if self.accept("+"):
                node = _fold(Add(node, self.term()))
            elif self.accept("-"):
                node = _fold(Sub(node, self.term()))
            else:
                return node

    def _starts_factor(self) -> bool:
        t = self.tok
        if t.kind in ("num", "name"):
            return True
        return t.kind == "op" and t.text == "("

    def term(self) -> Node:
        node = self.factor()
        while True:
            if self.accept("*"):
                node = _fold(Mul(node, self.factor()))
            elif self.tok.kind == "op" and self.tok.text == "/":
                self.i += 1
                pos = self.tok.pos
                rhs = self.factor()
                if self.mode == "polynomial" and not _is_constant(rhs):
                    self.error("division by a non-constant requires map mode", pos)
                if _is_constant(rhs) and rhs.value == 0:
                    self.error("division by zero", pos)
                node = _fold(Div(node, rhs))
            elif self._starts_factor():
                node = _fold(Mul(node, self.factor()))
            else:
                return node

    def factor(self) -> Node:
        node = self.base()
        if self.accept("^"):
            pos = self.tok.pos
            e = self.exponent()
            if self.mode == "polynomial":
                if e.denominator != 1:
                    self.error("fractional exponent requires map mode", pos)
                if e < 0:
                    self.error("negative exponent requires map mode", pos)
            node = _fold(Pow(node, e))
        return node

    def _integer(self) -> int:
        if self.tok.kind != "num" or "." in self.tok.text:
            self.error("expected an integer")
        v = int(self.tok.text)
        self.i += 1
        return v

    def exponent(self) -> Fraction:
        if self.accept("("):
            sign = -1 if self.accept("-") else 1
            num = self._integer()
            den = 1
            if self.accept("/"):
                pos = self.tok.pos
                den = self._integer()
                if den == 0:
                    self.error("zero denominator in exponent", pos)
            self.expect(")")
            return Fraction(sign * num, den)
        return Fraction(self._integer())

    def base(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Const(Fraction(t.text))
        if t.kind == "name":
            if t.text == "abs" and "abs" not in self.index:
                if self.mode == "polynomial":
                    self.error("absolute value requires map mode")
                self.i += 1
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Abs(inner)
            if t.text not in self.index:
                self.error(f"unknown variable {t.text!r}")
            self.i += 1
            return Var(self.index[t.text])
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        if t.kind == "op" and t.text == "|":
            if self.mode == "polynomial":
                self.error("absolute value requires map mode")
            self.i += 1
            inner = self.expr()
            self.expect("|")
            return Abs(inner)
        found = t.text or "end of input"
        self.error(f"unexpected {found!r}")


# ---------------------------------------------------------------------------
# conversion and printing

def _to_polynomial(node: Node, n: int) -> Polynomial:
    if isinstance(node, Const):
        return Polynomial.constant(n, node.value)
    if isinstance(node, Var):
        return Polynomial.variable(n, node.index)
    if isinstance(node, Neg):
        return -_to_polynomial(node.arg, n)
    if isinstance(node, Pow):
        return _to_polynomial(node.base, n) ** int(node.exponent)
    if isinstance(node, Div):
        return _to_polynomial(node.left, n) / node.right.value
    a, b = _to_polynomial(node.left, n), _to_polynomial(node.right, n)
    if isinstance(node, Add):
        return a + b
    if isinstance(node, Sub):
        return a - b
    if isinstance(node, Mul):
        return a * b
    raise TypeError(f"{type(node).__name__} has no polynomial meaning")


def _check_names(names: Sequence[str]):
    names = tuple(names)
    if not names:
        raise ValueError("at least one variable name is required")
    for n in names:
        if not NAME_RE.match(n):
            raise ValueError(f"invalid variable name {n!r}")
    if len(set(names)) != len(names):
        raise ValueError("variable names must be distinct")
    return names


def split_names(csv: str) -> Tuple[str, ...]:
    return _check_names([s.strip() for s in csv.split(",") if s.strip()])


def parse_polynomial(src: str, variables: Sequence[str]) -> ParseResult:
    names = _check_names(variables)
    node = _Parser(src, names, "polynomial").parse_single()
    return ParseResult(_to_polynomial(node, len(names)), names)


def parse_map(src: str, variables: Sequence[str]) -> ParseResult:
    """Parse ``expr (';' expr)*`` into a :class:`MapExpr`."""
    names = _check_names(variables)
    comps = _Parser(src, names, "map").parse_map()
    return ParseResult(MapExpr(tuple(comps), names), names)


_PREC = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _fmt_const(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def format_node(node: Node, names: Sequence[str]) -> str:
    """Print a node so that parsing the output in map mode gives it back."""

    def atom(n) -> str:
        # a string usable as the base of '^' or operand of a product
        if isinstance(n, Var):
            return names[n.index]
        if isinstance(n, Const) and n.value >= 0 and n.value.denominator == 1:
            return _fmt_const(n.value)
        if isinstance(n, Abs):
            return f"abs({fmt(n.arg, 0)})"
        return f"({fmt(n, 0)})"

    def fmt(n, ctx) -> str:
        # ctx: 0 = free (expression start), 1 = right operand of +/-,
        # 2 = operand of * or left of /, 3 = right operand of /
        if isinstance(n, Var):
            return names[n.index]
        if isinstance(n, Const):
            s = _fmt_const(n.value)
            if n.value < 0:
                return s if ctx == 0 else f"({s})"
            if n.value.denominator != 1 and ctx != 0:
                return f"({s})"
            return s
        if isinstance(n, Abs):
            return f"abs({fmt(n.arg, 0)})"
        if isinstance(n, Pow):
            e = n.exponent
            es = str(e.numerator) if e.denominator == 1 and e >= 0 else f"({_fmt_const(e)})"
            return f"{atom(n.base)}^{es}"
        if isinstance(n, Neg):
            s = "-" + fmt(n.arg, 2)
            return s if ctx == 0 else f"({s})"
        if isinstance(n, (Add, Sub)):
            op = "+" if isinstance(n, Add) else "-"
            s = f"{fmt(n.left, 0)} {op} {fmt(n.right, 1)}"
            return s if ctx == 0 else f"({s})"
        if isinstance(n, (Mul, Div)):
            op = "*" if isinstance(n, Mul) else "/"
            s = f"{fmt(n.left, 2)}{op}{fmt(n.right, 3)}"
            if ctx == 3:
                return f"({s})"
            return s
        raise TypeError(f"unknown node {n!r}")

    return fmt(node, 0)
