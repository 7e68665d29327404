"""Exact arithmetic in the coefficient tower: rationals, roots of unity,
parameters, and adjoined radicals.

The independent checks here are numeric: every algebraic identity asserted
exactly is also evaluated through the mpmath embedding from oracles.py, so a
bookkeeping bug in the symbolic normal form would show up as a numeric
mismatch even if the symbolic side were self-consistently wrong.
"""

from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest

from lipsat import Field
from lipsat.algebra import Cyclotomic, cyclotomic_polynomial, normal_form
from lipsat.errors import DivisionByZero

from oracles import numeric_cyclo, numeric_elem, numeric_env

TOL = mpmath.mpf("1e-80")


def tower_field() -> Field:
    """A field with two parameters and two radicals stacked on top."""
    field = Field()
    c = field.parameter("c")
    field.parameter("u")
    field.adjoin_radical(field.rational(Fraction(4, 3)) * c, 2)
    field.adjoin_radical(field.rational(2), 3)
    return field


def random_elem(field: Field, rng: random.Random):
    """A small random combination of generators, biased toward units."""
    gens = [field.one, field.rational(Fraction(rng.randint(-4, 4), rng.randint(1, 3)))]
    gens.append(field.parameter("c"))
    gens.append(field.parameter("u"))
    gens.append(field.zeta(4))
    gens.append(field.zeta(3))
    # re-adjoining an existing radical hands back the same symbol as an element
    gens.append(field.adjoin_radical(field.rational(Fraction(4, 3)) * gens[2], 2))
    gens.append(field.adjoin_radical(field.rational(2), 3))
    total = field.zero
    for _ in range(rng.randint(1, 3)):
        term = field.rational(rng.randint(-3, 3))
        for _ in range(rng.randint(0, 2)):
            term = term * rng.choice(gens)
        total = total + term
    return total


# ---------------------------------------------------------------------------
# ring and field axioms on seeded random triples
# ---------------------------------------------------------------------------


def test_ring_axioms_random_triples():
    rng = random.Random(20260815)
    field = tower_field()
    checked = 0
    for _ in range(70):
        a = random_elem(field, rng)
        b = random_elem(field, rng)
        c = random_elem(field, rng)
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + field.zero == a
        assert a * field.one == a
        assert (a - a).is_zero()
        assert (a * field.zero).is_zero()
        checked += 3
    assert checked >= 200


def test_multiplicative_inverses_random():
    rng = random.Random(7)
    field = tower_field()
    done = 0
    while done < 40:
        a = random_elem(field, rng)
        if a.is_zero():
            continue
        assert (a * a.inverse()).is_one()
        assert ((field.one / a) * a - field.one).is_zero()
        done += 1


def test_subtraction_and_negation():
    field = tower_field()
    a = field.parameter("c") + field.zeta(4)
    assert (-a) + a == field.zero
    assert field.zero - a == -a
    assert a - (-a) == a + a


# ---------------------------------------------------------------------------
# zero-test soundness via the numeric embedding
# ---------------------------------------------------------------------------


def test_zero_detection_on_nontrivial_cancellations():
    field = tower_field()
    c = field.parameter("c")
    g1 = field.adjoin_radical(field.rational(Fraction(4, 3)) * c, 2)
    g2 = field.adjoin_radical(field.rational(2), 3)
    cancels = [
        g1 * g1 - field.rational(Fraction(4, 3)) * c,
        g2 * g2 * g2 - field.rational(2),
        field.zeta(6) - field.one - field.zeta(3),
        (c + g1) * (c - g1) - (c * c - g1 * g1),
        field.zeta(3) ** 2 + field.zeta(3) + field.one,
    ]
    env = numeric_env(field, seed=3)
    for e in cancels:
        assert e.is_zero(), f"should cancel exactly: {e}"
        assert abs(numeric_elem(e, env)) < TOL


def test_nonzero_detection_numerically():
    rng = random.Random(99)
    field = tower_field()
    env = numeric_env(field, seed=5)
    for _ in range(60):
        a = random_elem(field, rng)
        val = abs(numeric_elem(a, env))
        if a.is_zero():
            assert val < TOL
        else:
            assert val > mpmath.mpf("1e-60"), f"claimed nonzero, numerically ~0: {a}"


def test_numeric_embedding_is_a_homomorphism():
    rng = random.Random(2024)
    field = tower_field()
    env = numeric_env(field, seed=2)
    for _ in range(30):
        a = random_elem(field, rng)
        b = random_elem(field, rng)
        na, nb = numeric_elem(a, env), numeric_elem(b, env)
        assert abs(numeric_elem(a + b, env) - (na + nb)) < TOL
        assert abs(numeric_elem(a * b, env) - na * nb) < TOL
        if not b.is_zero() and abs(nb) > mpmath.mpf("1e-40"):
            assert abs(numeric_elem(a / b, env) - na / nb) < mpmath.mpf("1e-60")


# ---------------------------------------------------------------------------
# roots of unity
# ---------------------------------------------------------------------------


def test_cyclotomic_golden_identities():
    field = Field()
    z3, z4, z6 = field.zeta(3), field.zeta(4), field.zeta(6)
    assert (z3 ** 3).is_one()
    assert z4 * z4 == -field.one
    assert (z3 ** 2 + z3 + field.one).is_zero()
    # cross-order identities force a common cyclotomic lift
    assert z6 == field.one + z3
    assert field.zeta(12) ** 3 == z4
    assert field.zeta(12) ** 4 == z3
    assert field.zeta(2) == -field.one


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8, 9])
def test_root_of_unity_sums_and_products(n):
    field = Field()
    roots = [field.zeta(n) ** k for k in range(n)]
    total = field.zero
    prod = field.one
    for r in roots:
        total = total + r
        prod = prod * r
    assert total.is_zero()
    # product over all n-th roots is (-1)^(n+1)
    assert prod == field.rational((-1) ** (n + 1))


def test_cyclotomic_numeric_agreement():
    for n in (3, 4, 5, 7, 12):
        for k in range(n):
            z = Cyclotomic.root(n, k)
            expect = mpmath.exp(2j * mpmath.pi * k / n)
            assert abs(numeric_cyclo(z) - expect) < TOL


def test_cyclotomic_polynomial_goldens():
    # coefficients low degree first
    as_ints = lambda tup: [int(q) for q in tup]
    assert as_ints(cyclotomic_polynomial(1)) == [-1, 1]
    assert as_ints(cyclotomic_polynomial(2)) == [1, 1]
    assert as_ints(cyclotomic_polynomial(4)) == [1, 0, 1]
    assert as_ints(cyclotomic_polynomial(12)) == [1, 0, -1, 0, 1]


def test_cyclotomic_polynomial_kills_primitive_root_only():
    for n in (5, 8, 12):
        coeffs = cyclotomic_polynomial(n)
        z = mpmath.exp(2j * mpmath.pi / n)
        val = sum(mpmath.mpf(q.numerator) / q.denominator * z ** k for k, q in enumerate(coeffs))
        assert abs(val) < mpmath.mpf("1e-100")
        w = mpmath.exp(2j * mpmath.pi * 2 / n) if n != 5 else mpmath.mpf(1)
        wal = sum(mpmath.mpf(q.numerator) / q.denominator * w ** k for k, q in enumerate(coeffs))
        assert abs(wal) > mpmath.mpf("1e-10")


# ---------------------------------------------------------------------------
# radical adjunction
# ---------------------------------------------------------------------------


def test_adjoin_radical_simplifies_perfect_powers():
    field = Field()
    assert field.adjoin_radical(field.rational(4), 2) == field.rational(2)
    assert field.adjoin_radical(field.rational(27), 3) == field.rational(3)
    assert field.adjoin_radical(field.rational(Fraction(9, 16)), 2) == field.rational(
        Fraction(3, 4)
    )
    assert not field.radicals()


def test_adjoin_radical_of_minus_one_is_root_of_unity():
    field = Field()
    z = field.adjoin_radical(field.rational(-1), 2)
    assert z == field.zeta(4)
    assert not field.radicals()


def test_adjoin_radical_defining_relation():
    field = Field()
    c = field.parameter("c")
    g = field.adjoin_radical(field.rational(Fraction(4, 3)) * c, 2)
    assert g * g == field.rational(Fraction(4, 3)) * c
    r = field.adjoin_radical(field.rational(2), 3)
    assert r ** 3 == field.rational(2)
    syms = field.radicals()
    assert [s.degree for s in syms] == [2, 3]
    env = numeric_env(field, seed=1)
    assert abs(numeric_elem(g, env) ** 2 - numeric_elem(field.rational(Fraction(4, 3)) * c, env)) < TOL


def test_adjoin_same_radical_twice_reuses_symbol():
    field = Field()
    a = field.adjoin_radical(field.rational(5), 2)
    b = field.adjoin_radical(field.rational(5), 2)
    assert a == b
    assert len(field.radicals()) == 1


# ---------------------------------------------------------------------------
# rational functions of parameters
# ---------------------------------------------------------------------------


def test_rational_function_display_and_parts():
    field = Field()
    t = field.parameter("t")
    two = field.rational(2)
    r = (field.one + two * t ** 3) / (field.one - two * t ** 3)
    assert str(r) == "(1 + 2*t^3)/(1 - 2*t^3)"
    assert r.num_str() == "1 + 2*t^3"
    assert r.den_str() == "1 - 2*t^3"


def test_rational_function_cancellation():
    field = Field()
    t = field.parameter("t")
    assert (t * t - field.one) / (t - field.one) == field.one + t
    r = (t ** 3) / (t ** 2)
    assert r == t


def test_differentiation_of_parameters():
    field = Field()
    t = field.parameter("t")
    u = field.parameter("u")
    e = field.rational(3) * t * t * u + t
    assert e.diff("t") == field.rational(6) * t * u + field.one
    assert e.diff("u") == field.rational(3) * t * t
    assert field.rational(7).diff("t").is_zero()


def test_normal_form_idempotent():
    rng = random.Random(11)
    field = tower_field()
    for _ in range(25):
        a = random_elem(field, rng)
        assert normal_form(a) == a


# ---------------------------------------------------------------------------
# failure modes
# ---------------------------------------------------------------------------


def test_division_by_zero_raises():
    field = tower_field()
    with pytest.raises(DivisionByZero):
        field.one / field.zero
    with pytest.raises(DivisionByZero):
        field.zero.inverse()
    c = field.parameter("c")
    with pytest.raises(DivisionByZero):
        c / (c - c)
