"""Expression parser and printer for scalar and 1-form inputs.

Grammar (precedence low to high): + -  |  * /  |  unary -  |  ^ (integer
power)  |  atoms.  Atoms are rational literals, geometric variables x1..x4
(aliases x, y, z, w), declared parameters, dx1..dx4 (aliases dx, dy, dz,
dw), the differential d(expr) of a scalar expression, and parenthesized
expressions.  Wedge is deliberately not in the grammar: inputs are 0- or
1-forms; higher-degree forms exist only internally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import FoliaError
from .exactmath import Poly, RatFn, VarCtx
from .forms import KForm, exterior_derivative

VAR_ALIASES = {"x": "x1", "y": "x2", "z": "x3", "w": "x4"}
GEOMETRIC_NAMES = ("x1", "x2", "x3", "x4")


class ParseError(FoliaError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.line = 1
        self.column = pos + 1
        super().__init__(f"{message} (line 1, column {self.column})")


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # num | name | op | end
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad = len(text) - len(stripped)
            raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
        if m.group("num"):
            out.append(Token("num", m.group("num"), m.start("num")))
        elif m.group("name"):
            out.append(Token("name", m.group("name"), m.start("name")))
        else:
            out.append(Token("op", m.group("op"), m.start("op")))
        pos = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Parser:
    """Recursive descent with a small precedence ladder."""

    def __init__(self, text: str, ctx: VarCtx):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.ctx = ctx

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str) -> None:
        tok = self.next()
        if tok.kind != "op" or tok.text != op:
            raise ParseError(f"expected {op!r}, found {tok.text or 'end of input'}", tok.pos)

    # expression := term (('+'|'-') term)*
    def expression(self) -> KForm:
        value = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.next().text
            rhs = self.term()
            value = self._add(value, rhs, op, self.tokens[self.i - 1].pos)
        return value

    def _add(self, a: KForm, b: KForm, op: str, pos: int) -> KForm:
        if a.degree != b.degree:
            # adding a zero form of either degree is fine
            if a.is_zero():
                a = KForm.zero(self.ctx, b.degree)
            elif b.is_zero():
                b = KForm.zero(self.ctx, a.degree)
            else:
                raise ParseError("cannot add a scalar and a 1-form", pos)
        return a + b if op == "+" else a - b

    # term := factor (('*'|'/') factor)*
    def term(self) -> KForm:
        value = self.factor()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.next().text
            pos = self.tokens[self.i - 1].pos
            rhs = self.factor()
            value = self._mul(value, rhs, op, pos)
        return value

    def _mul(self, a: KForm, b: KForm, op: str, pos: int) -> KForm:
        if op == "*":
            if a.degree == 0:
                return b * a.coeff(())
            if b.degree == 0:
                return a * b.coeff(())
            raise ParseError("product of two 1-forms is not in the input grammar", pos)
        if b.degree != 0:
            raise ParseError("division by a 1-form", pos)
        den = b.coeff(())
        if den.is_zero():
            raise ParseError("division by zero", pos)
        return a / den

    # factor := '-' factor | power
    def factor(self) -> KForm:
        if self.peek().kind == "op" and self.peek().text == "-":
            self.next()
            return -self.factor()
        if self.peek().kind == "op" and self.peek().text == "+":
            self.next()
            return self.factor()
        return self.power()

    # power := atom ('^' integer)?
    def power(self) -> KForm:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.next()
            sign = 1
            if self.peek().kind == "op" and self.peek().text == "-":
                self.next()
                sign = -1
            tok = self.next()
            if tok.kind != "num":
                raise ParseError("exponent must be an integer literal", tok.pos)
            n = sign * int(tok.text)
            if base.degree != 0:
                raise ParseError("only scalars can be raised to a power", tok.pos)
            return KForm.scalar(self.ctx, base.coeff(()) ** n)
        return base

    def atom(self) -> KForm:
        tok = self.next()
        if tok.kind == "num":
            return KForm.scalar(self.ctx, Fraction(int(tok.text)))
        if tok.kind == "op" and tok.text == "(":
            inner = self.expression()
            self.expect_op(")")
            return inner
        if tok.kind == "name":
            return self._name_atom(tok)
        raise ParseError(f"unexpected {tok.text!r}" if tok.text else "unexpected end of input", tok.pos)

    def _name_atom(self, tok: Token) -> KForm:
        name = tok.text
        # d(...) or the differential of a coordinate: dx1, dx, ...
        if name == "d" and self.peek().kind == "op" and self.peek().text == "(":
            self.next()
            inner = self.expression()
            self.expect_op(")")
            if inner.degree != 0:
                raise ParseError("d(...) applies to scalar expressions", tok.pos)
            return exterior_derivative(inner)
        if name.startswith("d") and len(name) > 1:
            target = VAR_ALIASES.get(name[1:], name[1:])
            if target in self.ctx.geometric:
                return KForm.dx(self.ctx, self.ctx.geometric.index(target))
        plain = VAR_ALIASES.get(name, name)
        if plain in self.ctx.geometric:
            return KForm.scalar(self.ctx, Poly.var(self.ctx, self.ctx.geometric.index(plain)))
        if plain in self.ctx.parameters:
            idx = self.ctx.arity + self.ctx.parameters.index(plain)
            return KForm.scalar(self.ctx, Poly.var(self.ctx, idx))
        raise ParseError(f"undeclared identifier {name!r}", tok.pos)


def infer_context(text: str, params: Sequence[str] = (), min_arity: int = 2) -> VarCtx:
    """Geometric arity = highest coordinate index mentioned (aliases map to
    x1..x4), at least `min_arity`."""
    names = set()
    for tok in tokenize(text):
        if tok.kind == "name":
            names.add(tok.text)
    arity = min_arity
    for n in names:
        core = n[1:] if n.startswith("d") and len(n) > 1 else n
        core = VAR_ALIASES.get(core, core)
        if core in GEOMETRIC_NAMES:
            arity = max(arity, int(core[1]))
    if arity > 4:
        raise ParseError("at most 4 geometric variables", 0)
    for p in params:
        if p in GEOMETRIC_NAMES or p in VAR_ALIASES:
            raise ParseError(f"parameter name {p!r} collides with a coordinate", 0)
    return VarCtx(GEOMETRIC_NAMES[:arity], tuple(params))


def parse_form(text: str, params: Sequence[str] = (), ctx: VarCtx | None = None,
               min_arity: int = 2) -> KForm:
    """Parse a scalar or 1-form expression over x1..x4 and declared
    parameters; exact rational arithmetic throughout."""
    if ctx is None:
        ctx = infer_context(text, params, min_arity)
    parser = _Parser(text, ctx)
    form = parser.expression()
    tok = parser.peek()
    if tok.kind != "end":
        raise ParseError(f"trailing input starting at {tok.text!r}", tok.pos)
    return form


def render_ratfn(r: RatFn) -> str:
    num = str(r.num)
    if r.is_polynomial():
        return num
    den = str(r.den)
    if len(r.num.terms) > 1:
        num = f"({num})"
    if len(r.den.terms) > 1:
        den = f"({den})"
    return f"{num}/{den}"


def render_form(omega: KForm) -> str:
    """Canonical grammar-compatible rendering of a 0- or 1-form."""
    if omega.degree == 0:
        return render_ratfn(omega.coeff(()))
    if omega.degree != 1:
        return str(omega)  # higher degrees are output-only
    if omega.is_zero():
        return "0"
    names = omega.ctx.geometric
    parts = []
    for (i,), c in sorted(omega.coeffs.items()):
        cs = render_ratfn(c)
        if cs == "1":
            parts.append(f"d{names[i]}")
            continue
        if len(c.num.terms) > 1 or not c.is_polynomial() or cs.startswith("-"):
            cs = f"({cs})"
        parts.append(f"{cs}*d{names[i]}")
    return " + ".join(parts)
