"""Expression and pair-file parsing.

Polynomial grammar (juxtaposition is NOT multiplication):

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' nat)?
    base   := RATIONAL | IDENT | '(' expr ')'

RATIONAL is a single token ``\\d+(/\\d+)?`` (so ``1/3`` is one literal, with
no spaces around the slash).  ``x`` and ``y`` are the curve variables; every
other identifier is a transcendental parameter of the coefficient field,
except ``zeta_N`` which denotes a primitive N-th root of unity.

Pair files: one pair per line,

    x1=<series>; y1=<series>; x2=<series>; y2=<series>

where a series is a sum of terms ``coef*t^e`` with ``e`` a positive integer
or a parenthesized positive rational like ``(5/2)``.  Coefficients use the
polynomial grammar above but may not contain ``t``, which is reserved for
the series variable.  Blank lines and ``#`` comment lines are skipped.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional

from .algebra import Field, FieldElem
from .errors import ParseError
from .polar import PairCurve
from .polynomials import Polynomial
from .series import INF, PuiseuxSeries

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<rational>\d+(?:/\d+)?)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*^();,=]))"
)

_ZETA_RE = re.compile(r"^zeta_(\d+)$")

_MAX_EXPONENT = 10000


class _Token:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind
        self.text = text
        self.pos = pos

    def __repr__(self):
        return f"_Token({self.kind!r}, {self.text!r}, {self.pos})"


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == m.start():
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            at = pos + (len(text[pos:]) - len(stripped))
            raise ParseError(
                f"unexpected character {stripped[0]!r}",
                position=at,
                expected=("rational", "identifier", "operator"),
            )
        pos = m.end()
        if m.group("rational") is not None:
            tokens.append(_Token("rational", m.group("rational"), m.start("rational")))
        elif m.group("ident") is not None:
            tokens.append(_Token("ident", m.group("ident"), m.start("ident")))
        elif m.group("op") is not None:
            tokens.append(_Token(m.group("op"), m.group("op"), m.start("op")))
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    """Recursive-descent parser evaluating directly into Polynomial values."""

    def __init__(self, text: str, field: Field, *, forbid: frozenset = frozenset()):
        self.text = text
        self.field = field
        self.tokens = _tokenize(text)
        self.i = 0
        self.forbid = forbid
        self.vars = ("x", "y")

    # -- token plumbing

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def take(self, kind: Optional[str] = None) -> _Token:
        tok = self.tokens[self.i]
        if kind is not None and tok.kind != kind:
            raise ParseError(
                f"expected {kind!r}, found {tok.text or 'end of input'!r}",
                position=tok.pos,
                expected=(kind,),
            )
        self.i += 1
        return tok

    def expect_end(self) -> None:
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(
                f"unexpected trailing input {tok.text!r}",
                position=tok.pos,
                expected=("end of input",),
            )

    # -- grammar

    def parse_expr(self) -> Polynomial:
        tok = self.peek()
        negate = False
        if tok.kind == "-":
            self.take()
            negate = True
        acc = self.parse_term()
        if negate:
            acc = -acc
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            rhs = self.parse_term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def parse_term(self) -> Polynomial:
        acc = self.parse_factor()
        while self.peek().kind == "*":
            self.take()
            acc = acc * self.parse_factor()
        return acc

    def parse_factor(self) -> Polynomial:
        base = self.parse_base()
        if self.peek().kind == "^":
            self.take()
            tok = self.peek()
            if tok.kind != "rational" or "/" in tok.text:
                raise ParseError(
                    "exponent must be a nonnegative integer literal",
                    position=tok.pos,
                    expected=("nonnegative integer",),
                )
            self.take()
            e = int(tok.text)
            if e > _MAX_EXPONENT:
                raise ParseError(
                    f"exponent {e} exceeds the supported bound {_MAX_EXPONENT}",
                    position=tok.pos,
                    expected=("small exponent",),
                )
            return base**e
        return base

    def parse_base(self) -> Polynomial:
        tok = self.peek()
        if tok.kind == "rational":
            self.take()
            return Polynomial.constant(
                self.field, self.vars, self.field.rational(Fraction(tok.text))
            )
        if tok.kind == "ident":
            self.take()
            return self._ident_value(tok)
        if tok.kind == "(":
            self.take()
            inner = self.parse_expr()
            close = self.peek()
            if close.kind != ")":
                raise ParseError(
                    "unbalanced parenthesis",
                    position=close.pos,
                    expected=(")",),
                )
            self.take()
            return inner
        raise ParseError(
            f"expected a value, found {tok.text or 'end of input'!r}",
            position=tok.pos,
            expected=("rational", "identifier", "("),
        )

    def _ident_value(self, tok: _Token) -> Polynomial:
        name = tok.text
        if name in self.forbid:
            raise ParseError(
                f"{name!r} is reserved for the series variable and cannot "
                "appear in coefficients",
                position=tok.pos,
                expected=("parameter", "x", "y"),
            )
        if name in self.vars:
            return Polynomial.variable(self.field, self.vars, name)
        m = _ZETA_RE.match(name)
        if m:
            n = int(m.group(1))
            if n <= 0:
                raise ParseError(
                    "root-of-unity order must be positive",
                    position=tok.pos,
                    expected=("zeta_N with N >= 1",),
                )
            return Polynomial.constant(self.field, self.vars, self.field.zeta(n, 1))
        return Polynomial.constant(self.field, self.vars, self.field.parameter(name))


def parse_poly(text: str, field: Optional[Field] = None) -> Polynomial:
    """Parse a polynomial in x, y over the field (a fresh one if omitted)."""
    if field is None:
        field = Field()
    p = _Parser(text, field)
    result = p.parse_expr()
    p.expect_end()
    return result


# --------------------------------------------------------------------------
# pair files
# --------------------------------------------------------------------------


def _parse_series_exponent(p: _Parser) -> Fraction:
    tok = p.peek()
    if tok.kind == "rational":
        if "/" in tok.text:
            raise ParseError(
                "fractional exponents must be parenthesized, like t^(5/2)",
                position=tok.pos,
                expected=("nat", "(num/den)"),
            )
        p.take()
        e = Fraction(int(tok.text))
    elif tok.kind == "(":
        p.take()
        neg = False
        if p.peek().kind == "-":
            p.take()
            neg = True
        num = p.take("rational")
        e = Fraction(num.text)
        if neg:
            e = -e
        p.take(")")
    else:
        raise ParseError(
            "expected an exponent",
            position=tok.pos,
            expected=("nat", "(num/den)"),
        )
    if e <= 0:
        raise ParseError(
            f"series exponents must be positive, got {e}",
            position=tok.pos,
            expected=("positive exponent",),
        )
    if e > _MAX_EXPONENT:
        raise ParseError(
            f"exponent {e} exceeds the supported bound {_MAX_EXPONENT}",
            position=tok.pos,
            expected=("small exponent",),
        )
    return e


def _parse_series_term(p: _Parser) -> tuple[Fraction, FieldElem]:
    """One term ``coef*t^e`` (sign already consumed by the caller)."""
    coeff = p.field.one
    saw_t = False
    while True:
        tok = p.peek()
        if tok.kind == "ident" and tok.text == "t":
            p.take()
            saw_t = True
            if p.peek().kind == "^":
                p.take()
                exp = _parse_series_exponent(p)
            else:
                exp = Fraction(1)
            break
        factor = p.parse_factor()
        if not factor.is_constant():
            raise ParseError(
                "series coefficients cannot involve x or y",
                position=tok.pos,
                expected=("constant coefficient",),
            )
        coeff = coeff * factor.constant_term()
        nxt = p.peek()
        if nxt.kind == "*":
            p.take()
            continue
        raise ParseError(
            "every series term must end in the variable t",
            position=nxt.pos,
            expected=("*", "t"),
        )
    if not saw_t:  # unreachable: the loop exits only through the t branch
        raise ParseError("missing series variable t", position=p.peek().pos)
    return exp, coeff


def parse_series(text: str, field: Field) -> PuiseuxSeries:
    """An exact Puiseux series: signed sum of ``coef*t^e`` terms."""
    p = _Parser(text, field, forbid=frozenset({"t"}))
    terms: dict[Fraction, FieldElem] = {}
    tok = p.peek()
    sign = 1
    if tok.kind == "-":
        p.take()
        sign = -1
    while True:
        exp, coeff = _parse_series_term(p)
        if sign < 0:
            coeff = -coeff
        terms[exp] = terms.get(exp, field.zero) + coeff
        nxt = p.peek()
        if nxt.kind == "+":
            p.take()
            sign = 1
        elif nxt.kind == "-":
            p.take()
            sign = -1
        elif nxt.kind == "end":
            break
        else:
            raise ParseError(
                f"unexpected {nxt.text!r} in series",
                position=nxt.pos,
                expected=("+", "-", "end of input"),
            )
    terms = {e: c for e, c in terms.items() if not c.is_zero()}
    return PuiseuxSeries.from_exponents(field, terms, INF)


_PAIR_KEYS = ("x1", "y1", "x2", "y2")


def parse_pair_line(line: str, field: Field, label: Optional[dict] = None) -> PairCurve:
    parts = [chunk.strip() for chunk in line.split(";")]
    parts = [c for c in parts if c]
    if len(parts) != 4:
        raise ParseError(
            f"a pair line needs the four assignments {', '.join(_PAIR_KEYS)}, "
            f"found {len(parts)} fields",
            position=0,
            expected=_PAIR_KEYS,
        )
    series = {}
    for want, chunk in zip(_PAIR_KEYS, parts):
        if "=" not in chunk:
            raise ParseError(
                f"expected {want}=<series>", position=0, expected=(f"{want}=",)
            )
        key, _, rhs = chunk.partition("=")
        key = key.strip()
        if key != want:
            raise ParseError(
                f"expected assignment to {want!r}, found {key!r}",
                position=0,
                expected=(want,),
            )
        series[want] = parse_series(rhs.strip(), field)
    return PairCurve(
        series["x1"], series["y1"], series["x2"], series["y2"], label=label
    )


def parse_pairs_file(text: str, field: Field) -> list[PairCurve]:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            pairs.append(parse_pair_line(line, field, label={"line": lineno}))
        except ParseError as exc:
            raise ParseError(
                f"line {lineno}: {exc.args[0] if exc.args else exc}",
                position=exc.position,
                expected=exc.expected,
            ) from exc
    return pairs
