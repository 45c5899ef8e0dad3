"""Plain-text format for charts, structures, sections, and functions.

Scene files are line oriented with ``#`` comments::

    dim 3
    coords x y z
    structure L order 3 = (1)*e1^e2^e3
    section a = (x)*dx2^dx3
    func f = x

Expression grammar: a tensor is a ``+``-separated sum of terms, each a
parenthesized polynomial coefficient optionally times a ``^``-joined wedge
of basis tokens (``dx<k>`` for forms, ``e<k>`` for multivector fields,
indices 1-based in declared coordinate order). A bare ``(poly)`` term is a
degree-0 value. Coordinate names are usable inside coefficients only, so a
coordinate can never collide with a basis token. Polynomial coefficients
use ``+ - * ^`` with rational literals ``a/b``.

Rendering is canonical and round-trips: ``parse(render(v))`` equals ``v``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .calculus import NambuStructure
from .errors import DegreeMismatch, ParseError
from .exterior import AlternatingTensor, Chart, DifferentialForm, MultivectorField, sort_with_sign
from .ring import Polynomial, Rational

_SYMBOLS = set("()*^+-/=")
_BASIS_RE = re.compile(r"(dx|e)([1-9][0-9]*)\Z")


@dataclass(frozen=True)
class Token:
    kind: str  # INT, IDENT, SYM, NEWLINE, EOF
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, column = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            tokens.append(Token("NEWLINE", "\n", line, column))
            line += 1
            column = 1
            i += 1
        elif ch in " \t\r":
            column += 1
            i += 1
        elif ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
                column += 1
        elif ch.isdigit():
            start = i
            start_col = column
            while i < len(text) and text[i].isdigit():
                i += 1
                column += 1
            tokens.append(Token("INT", text[start:i], line, start_col))
        elif ch.isalpha() or ch == "_":
            start = i
            start_col = column
            while i < len(text) and (text[i].isalnum() or text[i] == "_"):
                i += 1
                column += 1
            tokens.append(Token("IDENT", text[start:i], line, start_col))
        elif ch in _SYMBOLS:
            tokens.append(Token("SYM", ch, line, column))
            column += 1
            i += 1
        else:
            raise ParseError(line, column, "unexpected character", ch)
    tokens.append(Token("EOF", "", line, column))
    return tokens


@dataclass
class Scene:
    """A chart plus named structures, sections, and functions."""

    chart: Chart
    structures: dict[str, NambuStructure] = field(default_factory=dict)
    sections: dict[str, DifferentialForm] = field(default_factory=dict)
    functions: dict[str, Polynomial] = field(default_factory=dict)


class _Parser:
    def __init__(self, tokens: list[Token], chart: Chart | None = None,
                 functions: dict[str, Polynomial] | None = None):
        self.tokens = tokens
        self.pos = 0
        self.chart = chart
        self.functions = functions if functions is not None else {}

    # -- token plumbing ---------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "EOF":
            self.pos += 1
        return token

    def at_symbol(self, text: str) -> bool:
        token = self.peek()
        return token.kind == "SYM" and token.text == text

    def take_symbol(self, text: str) -> bool:
        if self.at_symbol(text):
            self.advance()
            return True
        return False

    def expect(self, kind: str, text: str | None = None, what: str | None = None) -> Token:
        token = self.peek()
        if token.kind != kind or (text is not None and token.text != text):
            expected = what or (text if text is not None else kind.lower())
            self.fail(f"expected {expected}", token)
        return self.advance()

    def fail(self, message: str, token: Token | None = None):
        token = token or self.peek()
        raise ParseError(token.line, token.column, message, token.text)

    def skip_newlines(self):
        while self.peek().kind == "NEWLINE":
            self.advance()

    def expect_end_of_statement(self):
        token = self.peek()
        if token.kind not in ("NEWLINE", "EOF"):
            self.fail("expected end of statement", token)

    # -- polynomial expressions -------------------------------------------

    def parse_polynomial(self) -> Polynomial:
        value = self.parse_poly_term()
        while True:
            if self.take_symbol("+"):
                value = value + self.parse_poly_term()
            elif self.take_symbol("-"):
                value = value - self.parse_poly_term()
            else:
                return value

    def parse_poly_term(self) -> Polynomial:
        value = self.parse_poly_unary()
        while self.take_symbol("*"):
            value = value * self.parse_poly_unary()
        return value

    def parse_poly_unary(self) -> Polynomial:
        if self.take_symbol("-"):
            return -self.parse_poly_unary()
        if self.take_symbol("+"):
            return self.parse_poly_unary()
        return self.parse_poly_power()

    def parse_poly_power(self) -> Polynomial:
        base = self.parse_poly_atom()
        if self.take_symbol("^"):
            exponent = self.expect("INT", what="a non-negative integer exponent")
            return base ** int(exponent.text)
        return base

    def parse_poly_atom(self) -> Polynomial:
        token = self.peek()
        dim = self.chart.dim
        if token.kind == "INT":
            self.advance()
            numerator = int(token.text)
            if self.at_symbol("/"):
                self.advance()
                denom_token = self.expect("INT", what="a denominator")
                if int(denom_token.text) == 0:
                    self.fail("zero denominator in rational literal", denom_token)
                return Polynomial.constant(dim, Rational(numerator, int(denom_token.text)))
            return Polynomial.constant(dim, numerator)
        if token.kind == "IDENT":
            self.advance()
            if token.text in self.chart.names:
                return Polynomial.coordinate(dim, self.chart.names.index(token.text))
            if token.text in self.functions:
                return self.functions[token.text]
            self.fail("unknown identifier in coefficient", token)
        if self.take_symbol("("):
            value = self.parse_polynomial()
            self.expect("SYM", ")", what="')'")
            return value
        self.fail("expected a number, a name, or a parenthesized expression", token)

    # -- tensor expressions -------------------------------------------------

    def parse_tensor(self, kind: str) -> AlternatingTensor:
        if kind == "form":
            cls, prefix = DifferentialForm, "dx"
        elif kind == "multivector":
            cls, prefix = MultivectorField, "e"
        else:
            raise ValueError(f"unknown tensor kind {kind!r}")
        terms: list[tuple[Polynomial, tuple[int, ...], Token]] = []
        while True:
            terms.append(self.parse_tensor_term(prefix))
            if not self.take_symbol("+"):
                break
        degree = len(terms[0][1])
        components: dict[tuple[int, ...], Polynomial] = {}
        for coeff, indices, token in terms:
            if len(indices) != degree:
                raise ParseError(
                    token.line,
                    token.column,
                    f"mixed degrees in expression: term has degree {len(indices)}, "
                    f"expected {degree}",
                    token.text,
                )
            normalized = sort_with_sign(indices)
            if normalized is None:
                continue  # repeated basis index: the term is zero
            sign, key = normalized
            if sign < 0:
                coeff = -coeff
            total = components.get(key)
            total = coeff if total is None else total + coeff
            components[key] = total
        return cls(self.chart, degree, components)

    def parse_tensor_term(self, prefix: str) -> tuple[Polynomial, tuple[int, ...], Token]:
        start = self.peek()
        if self.take_symbol("("):
            coeff = self.parse_polynomial()
            self.expect("SYM", ")", what="')'")
            if self.take_symbol("*"):
                return coeff, self.parse_wedge(prefix), start
            return coeff, (), start  # bare (poly): a degree-0 term
        return Polynomial.one(self.chart.dim), self.parse_wedge(prefix), start

    def parse_wedge(self, prefix: str) -> tuple[int, ...]:
        indices = [self.parse_basis(prefix)]
        while self.take_symbol("^"):
            indices.append(self.parse_basis(prefix))
        return tuple(indices)

    def parse_basis(self, prefix: str) -> int:
        token = self.peek()
        if token.kind != "IDENT":
            self.fail(f"expected a basis token like {prefix}1", token)
        match = _BASIS_RE.fullmatch(token.text)
        if match is None:
            self.fail(f"expected a basis token like {prefix}1", token)
        if match.group(1) != prefix:
            self.fail(
                f"basis token {token.text!r} does not belong here; expected {prefix}<k>",
                token,
            )
        index = int(match.group(2))
        if not 1 <= index <= self.chart.dim:
            self.fail(
                f"basis index {index} out of range 1..{self.chart.dim}", token
            )
        self.advance()
        return index - 1


def parse_expression(
    text: str,
    chart: Chart,
    kind: str,
    functions: dict[str, Polynomial] | None = None,
):
    """Parse a standalone expression of the given kind
    (``form`` | ``multivector`` | ``function``)."""
    tokens = [t for t in tokenize(text) if t.kind != "NEWLINE"]
    parser = _Parser(tokens, chart, functions)
    if kind == "function":
        value = parser.parse_polynomial()
    elif kind in ("form", "multivector"):
        value = parser.parse_tensor(kind)
    else:
        raise ValueError(f"unknown expression kind {kind!r}")
    token = parser.peek()
    if token.kind != "EOF":
        parser.fail("unexpected trailing input", token)
    return value


def parse_scene(text: str) -> Scene:
    """Parse a scene file.

    ``dim`` and ``coords`` must come first (in that order); any later
    definition may reference previously declared functions by name.
    Section degrees are checked against the declared structures once the
    whole scene is read.
    """
    parser = _Parser(tokenize(text))
    dim: int | None = None
    dim_token: Token | None = None
    scene: Scene | None = None
    section_tokens: dict[str, Token] = {}

    while True:
        parser.skip_newlines()
        if parser.peek().kind == "EOF":
            break
        keyword = parser.expect("IDENT", what="a statement keyword")

        if keyword.text == "dim":
            if dim is not None:
                parser.fail("duplicate dim statement", keyword)
            token = parser.expect("INT", what="the chart dimension")
            dim = int(token.text)
            dim_token = token
            if dim < 1:
                parser.fail("dimension must be at least 1", token)
        elif keyword.text == "coords":
            if dim is None:
                parser.fail("coords before dim", keyword)
            if scene is not None:
                parser.fail("duplicate coords statement", keyword)
            names: list[str] = []
            name_tokens: list[Token] = []
            while parser.peek().kind == "IDENT":
                token = parser.advance()
                if token.text in names:
                    parser.fail("duplicate coordinate", token)
                names.append(token.text)
                name_tokens.append(token)
            if len(names) != dim:
                parser.fail(
                    f"expected {dim} coordinate names, got {len(names)}", keyword
                )
            scene = Scene(Chart(names))
            parser.chart = scene.chart
            parser.functions = scene.functions
        elif keyword.text in ("structure", "section", "func"):
            if scene is None:
                parser.fail(f"{keyword.text} before dim/coords", keyword)
            name = parser.expect("IDENT", what=f"a {keyword.text} name")
            if keyword.text == "structure":
                if name.text in scene.structures:
                    parser.fail("duplicate structure name", name)
                parser.expect("IDENT", "order", what="'order'")
                order_token = parser.expect("INT", what="the structure order")
                order = int(order_token.text)
                parser.expect("SYM", "=", what="'='")
                tensor = parser.parse_tensor("multivector")
                if tensor.degree != order:
                    parser.fail(
                        f"structure tensor has degree {tensor.degree}, "
                        f"declared order is {order}",
                        order_token,
                    )
                try:
                    scene.structures[name.text] = NambuStructure(
                        scene.chart, order, tensor
                    )
                except ValueError as exc:
                    parser.fail(str(exc), order_token)
            elif keyword.text == "section":
                if name.text in scene.sections:
                    parser.fail("duplicate section name", name)
                parser.expect("SYM", "=", what="'='")
                scene.sections[name.text] = parser.parse_tensor("form")
                section_tokens[name.text] = name
            else:  # func
                if name.text in scene.functions:
                    parser.fail("duplicate function name", name)
                if name.text in scene.chart.names:
                    parser.fail("function name collides with a coordinate", name)
                parser.expect("SYM", "=", what="'='")
                scene.functions[name.text] = parser.parse_polynomial()
        else:
            parser.fail(
                "expected one of: dim, coords, structure, section, func", keyword
            )
        parser.expect_end_of_statement()

    if dim is not None and scene is None:
        raise ParseError(
            dim_token.line, dim_token.column, "dim declared but coords missing", "dim"
        )
    if scene is None:
        raise ParseError(1, 1, "empty scene: dim and coords are required")

    if scene.structures:
        orders = {s.order for s in scene.structures.values()}
        for name, section in scene.sections.items():
            if section.degree + 1 not in orders:
                raise DegreeMismatch(
                    f"section {name!r} has degree {section.degree}; no declared "
                    f"structure has order {section.degree + 1}"
                )
    return scene


def render(value, chart: Chart | None = None) -> str:
    """Canonical text for a tensor or polynomial; re-parses to an equal value.

    Polynomials need coordinate names: pass the chart, or get the default
    ``x1..xn`` naming.
    """
    if isinstance(value, AlternatingTensor):
        return value.render()
    if isinstance(value, Polynomial):
        if chart is not None:
            return value.render(chart.names)
        return str(value)
    raise TypeError(f"cannot render {type(value).__name__}")
