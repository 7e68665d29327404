"""Fractional-exponent formal series: arithmetic, truncation bookkeeping,
parsing, and sheet conjugation.

Arithmetic is cross-checked against a plain {Fraction exponent: Fraction
coefficient} dictionary model, and conjugation against the numeric embedding,
so the series layer never certifies itself.
"""

from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest

from lipsat import Field
from lipsat.errors import ParseError
from lipsat.parsing import parse_series
from lipsat.series import OrderValue, PuiseuxSeries

from oracles import numeric_series, series_fractions

TOL = mpmath.mpf("1e-80")


def random_series(field: Field, rng: random.Random) -> PuiseuxSeries:
    ram = rng.choice([1, 2, 3, 4])
    pairs = {}
    for _ in range(rng.randint(0, 4)):
        exp = Fraction(rng.randint(0, 9), ram)
        pairs[exp] = field.rational(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
    return PuiseuxSeries.from_exponents(field, pairs)


def model(s: PuiseuxSeries) -> dict[Fraction, Fraction]:
    return series_fractions(s)


def model_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c}


def model_mul(a: dict, b: dict) -> dict:
    out: dict[Fraction, Fraction] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            out[e1 + e2] = out.get(e1 + e2, Fraction(0)) + c1 * c2
    return {e: c for e, c in out.items() if c}


# ---------------------------------------------------------------------------
# arithmetic against the dictionary model
# ---------------------------------------------------------------------------


def test_arithmetic_matches_fraction_model():
    rng = random.Random(515)
    field = Field()
    for _ in range(60):
        a = random_series(field, rng)
        b = random_series(field, rng)
        assert model(a + b) == model_add(model(a), model(b))
        assert model(a - b) == model_add(model(a), {e: -c for e, c in model(b).items()})
        assert model(a * b) == model_mul(model(a), model(b))
        assert model(-a) == {e: -c for e, c in model(a).items()}


def test_power_matches_repeated_product():
    field = Field()
    s = parse_series("1*t^(1/2) + 2*t", field)
    assert (s ** 3).same_terms(s * s * s)
    assert model(s ** 3) == model_mul(model(s), model_mul(model(s), model(s)))


def test_invert_round_trip():
    rng = random.Random(99)
    field = Field()
    done = 0
    while done < 20:
        a = random_series(field, rng)
        if a.is_identically_zero():
            continue
        target = a.leading()[0] + 5
        inv = a.invert(target)
        prod = inv * a
        one = model(prod)
        # all recorded terms of inv*a below the target agree with 1
        assert one.get(Fraction(0)) == 1
        assert all(c == 0 for e, c in one.items() if e != 0 and e < target)
        done += 1


def test_divide_golden_and_round_trip():
    field = Field()
    num = parse_series("5*t^(3/2) + 2*t^2", field)
    den = parse_series("3*t^(1/2) - 1*t^2", field)
    q = num.divide(den, Fraction(3))
    assert q.render() == "5/3*t + 2/3*t^(3/2) + 5/9*t^(5/2)"
    back = model(q * den)
    target = model(num)
    for e in set(back) | set(target):
        if e < Fraction(3) + Fraction(1, 2):
            assert back.get(e, Fraction(0)) == target.get(e, Fraction(0))


# ---------------------------------------------------------------------------
# truncation honesty
# ---------------------------------------------------------------------------


def test_truncation_propagates_through_sums_and_products():
    field = Field()
    exact = PuiseuxSeries.from_exponents(
        field, {Fraction(1, 2): field.rational(3), Fraction(2): field.rational(-1)}
    )
    cut = PuiseuxSeries.from_exponents(field, {Fraction(1): field.one}, trunc=Fraction(3))
    assert not cut.is_exact()
    assert exact.is_exact()
    s = cut + exact
    # knowledge boundary stays at exponent 3 (lattice written on ram 2)
    assert Fraction(s.trunc, s.ram) == Fraction(3)
    p = cut * exact
    # product terms are complete below 3 + ord(exact) = 7/2
    assert Fraction(p.trunc, p.ram) == Fraction(7, 2)


def test_truncated_difference_reports_at_least():
    field = Field()
    s = PuiseuxSeries.from_exponents(
        field, {Fraction(1, 2): field.one}, trunc=Fraction(5, 2)
    )
    d = s - s
    ov = d.order()
    assert ov.kind == "at_least"
    assert ov.value == Fraction(5, 2)
    assert not d.is_identically_zero()


def test_exact_zero_has_zero_order_kind():
    field = Field()
    z = PuiseuxSeries.from_exponents(field, {})
    assert z.is_identically_zero()
    assert z.order().kind == "zero"


def test_order_value_comparisons():
    ex = OrderValue.exact(Fraction(3, 2))
    assert ex.known_at_least(Fraction(3, 2))
    assert ex.known_below(Fraction(2))
    assert not ex.known_below(Fraction(3, 2))
    al = OrderValue.at_least(Fraction(5))
    assert al.known_at_least(Fraction(5))
    assert al.known_at_least(Fraction(4))
    assert not al.known_at_least(Fraction(6))
    assert not al.known_below(Fraction(6))  # might be exactly 6 or higher
    z = OrderValue.zero()
    assert z.known_at_least(Fraction(100))
    assert not z.known_below(Fraction(100))
    assert ex.describe() == "= 3/2"
    assert al.describe() == ">= 5"
    assert z.describe() == "identically zero"


# ---------------------------------------------------------------------------
# structure: leading term, coefficients, lattice changes
# ---------------------------------------------------------------------------


def test_leading_and_coeff():
    field = Field()
    s = parse_series("5*t^(3/2) + 2*t^2", field)
    exp, lead = s.leading()
    assert exp == Fraction(3, 2)
    assert lead == field.rational(5)
    assert s.coeff(Fraction(3, 2)) == field.rational(5)
    assert s.coeff(Fraction(2)) == field.rational(2)
    assert s.coeff(Fraction(7)).is_zero()


def test_lift_and_common_preserve_value():
    field = Field()
    a = parse_series("5*t^(3/2) + 2*t^2", field)
    lifted = a.lift(4)
    assert lifted.ram == 4
    assert model(lifted) == model(a)
    b = parse_series("1*t^(1/3)", field)
    ca, cb = PuiseuxSeries.common(a, b)
    assert ca.ram == cb.ram == 6
    assert model(ca) == model(a)
    assert model(cb) == model(b)


def test_monomial_constructor():
    field = Field()
    m = PuiseuxSeries.monomial(field, field.rational(7), Fraction(5, 3))
    assert model(m) == {Fraction(5, 3): Fraction(7)}
    assert m.ram == 3


# ---------------------------------------------------------------------------
# conjugation (reparametrization t -> zeta t)
# ---------------------------------------------------------------------------


def test_conjugate_golden_half_integer():
    field = Field()
    s = parse_series("5*t^(3/2) + 2*t^2", field)
    c = s.conjugate(1)
    # t -> -t on the square-root lattice flips odd lattice exponents
    assert c.render() == "-5*t^(3/2) + 2*t^2"
    assert s.conjugate(0).same_terms(s)
    assert c.conjugate(1).same_terms(s)


def test_conjugate_is_multiplicative():
    field = Field()
    a = parse_series("1*t^(1/3) + 1*t", field)
    b = parse_series("2*t^(2/3) - 1*t^2", field)
    for j in (1, 2):
        assert (a * b).conjugate(j).same_terms(a.conjugate(j) * b.conjugate(j))


def test_conjugate_matches_numeric_substitution():
    field = Field()
    s = parse_series("1*t^(1/3) + 2*t + 1*t^(5/3)", field)
    env: dict = {}
    # the twist substitutes s -> zeta*s on the cube-root lattice s = t^(1/3),
    # so evaluate both sides as functions of s (t = s^3 real positive)
    s0 = mpmath.mpf("0.37")
    for j in range(3):
        zj = mpmath.exp(2 * mpmath.pi * mpmath.mpc(0, 1) * j / 3)
        lhs = numeric_series(s.conjugate(j), env, s0 ** 3)
        rhs = sum(
            mpmath.mpf(c.rational_value().numerator)
            / c.rational_value().denominator
            * (zj * s0) ** k
            for k, c in s.terms.items()
        )
        assert abs(lhs - rhs) < TOL


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "text,rendered,ram",
    [
        ("1*t^(3/2)", "1*t^(3/2)", 2),
        ("t^2", "1*t^2", 1),
        ("-t^3", "-1*t^3", 1),
        ("2*t", "2*t", 1),
        ("(1/2)*t^2", "1/2*t^2", 1),
        ("-1*t^5 + 1*t^7", "-1*t^5 + 1*t^7", 1),
        ("zeta_4^1*t^3", "zeta_4*t^3", 1),
    ],
)
def test_parse_series_goldens(text, rendered, ram):
    field = Field()
    s = parse_series(text, field)
    assert s.render() == rendered
    assert s.ram == ram


@pytest.mark.parametrize("bad", ["t^-1", "x + t", "", "1*s^2", "0"])
def test_parse_series_rejects_malformed(bad):
    field = Field()
    with pytest.raises(ParseError):
        parse_series(bad, field)


def test_parse_round_trip_through_render():
    field = Field()
    for text in ("5*t^(3/2) + 2*t^2", "-1*t^5 + 1*t^7", "zeta_4*t^3"):
        s = parse_series(text, field)
        again = parse_series(s.render(), field)
        assert again.same_terms(s)
