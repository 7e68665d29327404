"""Expression grammar for germs and for parametrized pair files."""

from __future__ import annotations

from fractions import Fraction

import pytest

from lipsat import Field, parse_poly
from lipsat.errors import ParseError
from lipsat.parsing import parse_pair_line, parse_pairs_file

from conftest import ROUND_TRIP_CORPUS


# ---------------------------------------------------------------------------
# polynomial germs
# ---------------------------------------------------------------------------


def test_poly_golden_terms():
    field = Field()
    p = parse_poly("x^3 + y^4", field)
    assert {k: str(v) for k, v in p.terms.items()} == {(3, 0): "1", (0, 4): "1"}
    q = parse_poly("(1/3)*x^3 - y^7 - x*y^5", field)
    assert str(q.terms[(3, 0)]) == "1/3"
    assert str(q.terms[(0, 7)]) == "-1"
    assert str(q.terms[(1, 5)]) == "-1"


def test_poly_products_expand():
    field = Field()
    p = parse_poly("(x - y^2)*(x - 2*y^2)", field)
    assert str(p) == "x^2 - 3*x*y^2 + 2*y^4"
    assert p == parse_poly("x^2 - 3*x*y^2 + 2*y^4", field)


def test_poly_term_order_is_immaterial():
    field = Field()
    assert parse_poly("x^3 + y^4", field) == parse_poly("y^4 + x^3", field)


def test_unknown_identifiers_become_parameters():
    field = Field()
    parse_poly("t*x + z^2", field)
    assert field.parameters() == ["t", "z"]


def test_parameter_coefficients_parse_exactly():
    field = Field()
    p = parse_poly("x^3 - 3*t^2*x*y^4 + y^6", field)
    t = field.parameter("t")
    assert p.terms[(1, 4)] == field.rational(-3) * t * t


def test_negative_exponent_rejected():
    field = Field()
    with pytest.raises(ParseError, match="exponent must be a nonnegative integer literal"):
        parse_poly("x^-1", field)


@pytest.mark.parametrize("bad", ["", "x +", "(x", "x ** 2", "3 x"])
def test_malformed_polynomials_rejected(bad):
    field = Field()
    with pytest.raises(ParseError):
        parse_poly(bad, field)


@pytest.mark.parametrize("text", ROUND_TRIP_CORPUS)
def test_poly_round_trip(text):
    field = Field()
    p = parse_poly(text, field)
    assert parse_poly(str(p), field) == p


def test_zeta_coefficients_in_polynomials():
    field = Field()
    p = parse_poly("zeta_4^1*x + y", field)
    assert p.terms[(1, 0)] == field.zeta(4)


# ---------------------------------------------------------------------------
# pair files
# ---------------------------------------------------------------------------


def test_pair_line_quarter_turn_fiber_pair():
    field = Field()
    pair = parse_pair_line("x1=1*t^4; y1=1*t^3; x2=1*t^4; y2=zeta_4^1*t^3", field)
    assert pair.x1.render() == "1*t^4"
    assert pair.y1.render() == "1*t^3"
    assert pair.x2.render() == "1*t^4"
    assert pair.y2.render() == "zeta_4*t^3"


def test_pair_line_opposite_sheets():
    field = Field()
    pair = parse_pair_line("x1=1*t^5; y1=1*t^2; x2=-1*t^5; y2=1*t^2", field)
    assert pair.x2.render() == "-1*t^5"
    s, coord = pair.delta()
    assert coord == "x"
    assert s.render() == "2*t^5"


def test_pair_line_whitespace_insensitive():
    field = Field()
    a = parse_pair_line("x1=1*t^5; y1=1*t^2; x2=-1*t^5; y2=1*t^2", field)
    b = parse_pair_line("x1 = 1*t^5 ;  y1 = 1*t^2 ;x2= -1*t^5;y2=1*t^2", field)
    assert a.x1.same_terms(b.x1) and a.x2.same_terms(b.x2)
    assert a.y1.same_terms(b.y1) and a.y2.same_terms(b.y2)


def test_pair_line_fractional_exponents_normalize_ram():
    field = Field()
    pair = parse_pair_line("x1=1*t^(3/2); y1=1*t; x2=-1*t^(3/2); y2=1*t", field)
    assert pair.x1.ram == 2
    assert pair.x1.leading() == (Fraction(3, 2), field.one)
    dx, dy = pair.diffs()
    assert dx.render() == "2*t^(3/2)"
    assert dy.is_identically_zero()


def test_pairs_file_comments_blanks_and_labels():
    field = Field()
    text = (
        "# demo file\n"
        "x1=1*t^4; y1=1*t^3; x2=1*t^4; y2=zeta_4^1*t^3\n"
        "\n"
        "x1=1*t^5; y1=1*t^2; x2=-1*t^5; y2=1*t^2\n"
    )
    pairs = parse_pairs_file(text, field)
    assert len(pairs) == 2
    assert [p.label for p in pairs] == [{"line": 2}, {"line": 4}]


def test_pair_line_requires_all_four_assignments():
    field = Field()
    with pytest.raises(ParseError):
        parse_pair_line("x1=1*t^5; y1=1*t^2", field)
    with pytest.raises(ParseError):
        parse_pair_line("x1=1*t^5; y1=1*t^2; x2=-1*t^5; z2=1*t^2", field)


def test_pairs_file_reports_offending_line():
    field = Field()
    text = "x1=1*t^4; y1=1*t^3; x2=1*t^4; y2=zeta_4^1*t^3\nx1=oops\n"
    with pytest.raises(ParseError, match="2"):
        parse_pairs_file(text, field)
