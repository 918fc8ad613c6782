"""Recursive-descent parser for symbol expressions.

Grammar (whitespace insensitive)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | atom ('^' ['-'] INT)?
    atom    := NUMBER | NUMBER 'i' | 'i' | 'z'
             | 'conj' '(' expr ')'
             | 'B' '[' expr (',' expr)* ']'
             | '(' expr ')'

Number atoms are real or purely imaginary; a general complex constant such
as 1+2i is an addition.  The zero list of a Blaschke atom is evaluated at
parse time (each slot must be a constant expression with modulus < 1), so a
Blaschke node stores plain complex zeros.  Printing is canonical and
re-parses to the identical tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .factorization import BlaschkeProduct, blaschke_from_rational
from .rational import RationalFunction

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_]\w*)"
    r"|(?P<op>[-+*/^()\[\],]))"
)


@dataclass(frozen=True)
class Num:
    value: complex

    def __str__(self):
        v = self.value
        if v.imag == 0:
            return _fmt_real(v.real)
        return _fmt_real(v.imag) + "i"


@dataclass(frozen=True)
class Var:
    def __str__(self):
        return "z"


@dataclass(frozen=True)
class Conj:
    arg: object

    def __str__(self):
        return f"conj({self.arg})"


@dataclass(frozen=True)
class Blaschke:
    zeros: tuple

    def __str__(self):
        return "B[" + ", ".join(_fmt_complex(z) for z in self.zeros) + "]"


@dataclass(frozen=True)
class Neg:
    arg: object

    def __str__(self):
        return "-" + _wrap(self.arg, 3)


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int

    def __str__(self):
        return f"{_wrap(self.base, 4)}^{self.exponent}"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object

    def __str__(self):
        prec = _PREC[self.op]
        left = _wrap(self.left, prec)
        # '-' and '/' need parens around same-precedence right operands
        right = _wrap(self.right, prec + (1 if self.op in "-/" else 0))
        return f"{left} {self.op} {right}"


_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _precedence(node) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    return 5


def _wrap(node, minimum: int) -> str:
    text = str(node)
    return f"({text})" if _precedence(node) < minimum else text


def _fmt_real(x: float) -> str:
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(x)


def _fmt_complex(v: complex) -> str:
    if v.imag == 0:
        return _fmt_real(v.real)
    if v.real == 0:
        return _fmt_real(v.imag) + "i"
    sign = "+" if v.imag > 0 else "-"
    return f"{_fmt_real(v.real)} {sign} {_fmt_real(abs(v.imag))}i"


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group("number") is not None:
            tokens.append(("number", m.group("number"), m.start("number")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, value: str):
        kind, text, at = self.next()
        if text != value:
            raise ParseError(f"expected {value!r}, found {text or 'end of input'!r}", at)

    def parse(self):
        node = self.expr()
        kind, text, at = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {text!r}", at)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.next()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[1] in ("*", "/"):
            op = self.next()[1]
            node = BinOp(op, node, self.factor())
        return node

    def factor(self):
        # '^' binds tighter than unary minus: -z^2 is -(z^2)
        if self.peek()[1] == "-":
            self.next()
            return Neg(self.factor())
        node = self.atom()
        if self.peek()[1] == "^":
            self.next()
            sign = 1
            if self.peek()[1] == "-":
                self.next()
                sign = -1
            kind, text, at = self.next()
            if kind != "number" or not re.fullmatch(r"\d+", text):
                raise ParseError("exponent must be an integer literal", at)
            node = Pow(node, sign * int(text))
        return node

    def atom(self):
        kind, text, at = self.next()
        if kind == "number":
            value = float(text)
            nk, nt, _ = self.peek()
            if nk == "name" and nt == "i":
                self.next()
                return Num(complex(0.0, value))
            return Num(complex(value, 0.0))
        if kind == "name":
            if text == "z":
                return Var()
            if text == "i":
                return Num(1j)
            if text == "conj":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return Conj(inner)
            if text == "B":
                self.expect("[")
                zeros = [self._blaschke_zero()]
                while self.peek()[1] == ",":
                    self.next()
                    zeros.append(self._blaschke_zero())
                self.expect("]")
                return Blaschke(tuple(zeros))
            raise ParseError(f"unknown name {text!r}", at)
        if text == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected token {text or 'end of input'!r}", at)

    def _blaschke_zero(self) -> complex:
        at = self.peek()[2]
        node = self.expr()
        value = lower(node)
        if not value.is_constant:
            raise ParseError("Blaschke zero must be a constant", at)
        zero = complex(value.num.coeffs[0]) if not value.is_zero else 0j
        if abs(zero) >= 1.0:
            raise ParseError(f"Blaschke zero {zero:.6g} outside open disk", at)
        return zero


def parse_symbol(text: str):
    """Parse an expression into its tree form."""
    return _Parser(text).parse()


def lower(node) -> RationalFunction:
    """Evaluate a parse tree in the rational-function field."""
    if isinstance(node, Num):
        return RationalFunction.const(node.value)
    if isinstance(node, Var):
        return RationalFunction.z()
    if isinstance(node, Conj):
        return lower(node.arg).conj_reflect()
    if isinstance(node, Blaschke):
        return BlaschkeProduct(node.zeros).as_rational()
    if isinstance(node, Neg):
        return -lower(node.arg)
    if isinstance(node, Pow):
        return lower(node.base) ** node.exponent
    if isinstance(node, BinOp):
        left, right = lower(node.left), lower(node.right)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return left / right
    raise TypeError(f"not a parse node: {node!r}")


def parse_rational(text: str) -> RationalFunction:
    """Parse and lower an expression to a rational function."""
    return lower(parse_symbol(text))


def parse_blaschke(text: str) -> BlaschkeProduct:
    """Parse an inner-function expression to a finite Blaschke product.

    Accepts the B[...] form directly, and anything (like z^5 or products of
    B atoms) whose lowering is a rational inner function.
    """
    node = parse_symbol(text)
    if isinstance(node, Blaschke):
        return BlaschkeProduct(node.zeros)
    try:
        return blaschke_from_rational(lower(node))
    except ValueError as exc:
        raise ParseError(f"not a finite Blaschke product: {exc}") from exc
