"""Branch expansion of plane-curve germs and its back-substitution oracle.

Compositions are re-done independently -- through sympy for rational
branches and through the mpmath embedding for branches with roots of unity
or adjoined radicals -- so the expander is never trusted on its own word.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from lipsat import Field, parse_poly
from lipsat.errors import PrecisionExceeded, UnsupportedExtension
from lipsat.puiseux import branch_residual, default_precision, newton_puiseux

from conftest import RESIDUAL_CORPUS, SEPTIC_CUSP, fresh
from oracles import numeric_env, numeric_poly_at, numeric_series, series_fractions, sympy_compose


def expand(text: str, K=None, params=()):
    field, f = fresh(text, params)
    return field, f, newton_puiseux(f, K)


# ---------------------------------------------------------------------------
# golden branches
# ---------------------------------------------------------------------------


def test_ordinary_cusp_branch():
    _, _, e = expand("x^2 - y^3", 12)
    assert e.vertical_multiplicity == 0
    (b,) = e.branches
    assert b.describe() == {"x": "1*t^3", "y": "1*t^2", "ram": 2}
    assert b.is_exact()


def test_higher_cusp_branch():
    _, _, e = expand("x^2 - y^5", 12)
    (b,) = e.branches
    assert b.describe() == {"x": "1*t^5", "y": "1*t^2", "ram": 2}


def test_three_lines_through_origin():
    _, _, e = expand("x^3 - y^3", 10)
    assert sorted(b.x.render() for b in e.branches) == [
        "((-1 - 1*zeta_3))*t",
        "1*t",
        "zeta_3*t",
    ]
    assert all(b.ram == 1 for b in e.branches)


def test_quartic_cusp_single_class():
    _, _, e = expand("x^3 + y^4", 20)
    (b,) = e.branches
    assert b.describe() == {"x": "-1*t^4", "y": "1*t^3", "ram": 3}


def test_quintic_cusp_needs_eighth_root_of_unity():
    field, _, e = expand("x^4 + y^5", 20)
    (b,) = e.branches
    assert b.describe() == {"x": "zeta_8*t^5", "y": "1*t^4", "ram": 4}
    # minus one has a fourth root among roots of unity; no radical appears
    assert field.radicals() == []


def test_generic_polar_of_quartic_adjoins_a_radical():
    field, _, e = expand("3*x^2 - 4*c*y^3", 20, params=("c",))
    (b,) = e.branches
    assert b.ram == 2
    (gamma_sq,) = [s for s in field.radicals()]
    assert str(gamma_sq.radicand) == "4/3*c"
    assert gamma_sq.degree == 2
    exp, lead = b.x.leading()
    assert exp == Fraction(3)  # x ~ gamma*t^3 on y = t^2
    assert lead * lead == field.rational(Fraction(4, 3)) * field.parameter("c")


def test_family_polar_splits_into_two_parameter_lines():
    _, _, e = expand("3*x^2 - 3*t^2*y^4", 12, params=("t",))
    assert sorted(b.x.render() for b in e.branches) == ["-t*t^2", "t*t^2"]
    assert all(b.ram == 1 for b in e.branches)


def test_three_smooth_branches_with_distinct_contacts():
    _, _, e = expand("(x - y^2)*(x - 2*y^2)*(x - y^3)", 12)
    assert sorted(b.x.render() for b in e.branches) == ["1*t^2", "1*t^3", "2*t^2"]


def test_vertical_component_is_split_off():
    _, _, e = expand("y*(x^2 - y^3)", 12)
    assert e.vertical_multiplicity == 1
    (b,) = e.branches
    assert b.describe() == {"x": "1*t^3", "y": "1*t^2", "ram": 2}


def test_smooth_germ():
    _, _, e = expand("x - y", 12)
    (b,) = e.branches
    assert b.describe() == {"x": "1*t", "y": "1*t", "ram": 1}


def test_squarefree_reduction_before_expansion():
    _, _, e = expand("(x - y^2)^2", 12)
    assert str(e.reduced) == "x - y^2"
    (b,) = e.branches
    assert b.x.render() == "1*t^2"


def test_septic_cusp_curve_branch():
    field, f, e = expand(SEPTIC_CUSP, 16)
    (b,) = e.branches
    assert b.ram == 3
    exp, lead = b.x.leading()
    assert exp == Fraction(7)  # x ~ lead*t^7 on y = t^3
    # leading coefficient is a cube root of 3: x^3 = 3 y^7 at lowest order
    assert lead ** 3 == field.rational(3)
    assert not b.is_exact()


# ---------------------------------------------------------------------------
# precision control
# ---------------------------------------------------------------------------


def test_default_precision_grows_with_degree():
    for text, expected in [
        ("x^2 - y^3", 28),
        ("x^3 + y^4", 32),
        (SEPTIC_CUSP, 44),
        ("x^3 - 3*t^2*x*y^4 + y^6", 40),
    ]:
        field = Field()
        assert default_precision(parse_poly(text, field)) == expected


def test_nearby_branches_below_cap_raise():
    field, f = fresh("(x - y^2)*(x - y^2 - y^9)")
    with pytest.raises(PrecisionExceeded):
        newton_puiseux(f, 4)


def test_nearby_branches_separate_once_cap_passes_contact():
    _, _, e = expand("(x - y^2)*(x - y^2 - y^9)", 16)
    assert sorted(b.x.render() for b in e.branches) == ["1*t^2", "1*t^2 + 1*t^9"]


def test_irreducible_nonbinomial_face_is_refused():
    field, f = fresh("x^3 + x*y^2 + y^3")
    with pytest.raises(UnsupportedExtension):
        newton_puiseux(f, 12)


# ---------------------------------------------------------------------------
# back-substitution residuals (the expansion's defining property)
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("K", [32, 64])
@pytest.mark.parametrize("text,params", RESIDUAL_CORPUS)
def test_residual_order_meets_requested_precision(text, params, K):
    field, f = fresh(text, params)
    e = newton_puiseux(f, K)
    assert e.precision == K
    assert e.branches, f"no branches for {text}"
    for b in e.branches:
        for j in range(b.ram):
            ov = branch_residual(f, b, j)
            assert ov.known_at_least(Fraction(K)), (
                f"{text}: branch {b.x.render()} sheet {j} residual {ov.describe()}"
            )


def test_septic_cusp_residual_at_moderate_precision():
    field, f, e = expand(SEPTIC_CUSP, 16)
    (b,) = e.branches
    ov = branch_residual(f, b, 0)
    # error term enters at ord(f_x . phi) + ram*K = 14 + 48
    assert ov.kind == "at_least"
    assert ov.value == Fraction(62)


def test_exact_branches_have_identically_zero_residual():
    for text in ("x^2 - y^3", "x^3 + y^4", "x^4 + y^5"):
        field, f, e = expand(text, 40)
        for b in e.branches:
            assert b.is_exact()
            for j in range(b.ram):
                assert branch_residual(f, b, j).kind == "zero"


def test_smooth_branch_is_reported_at_bound_only():
    # a linear-face tail is known term by term, never declared closed
    field, f, e = expand("x - y", 40)
    (b,) = e.branches
    assert not b.is_exact()
    ov = branch_residual(f, b, 0)
    assert ov.kind == "at_least" and ov.value == Fraction(40)


# ---------------------------------------------------------------------------
# independent composition oracles
# ---------------------------------------------------------------------------


def test_rational_branches_vanish_under_sympy_composition():
    cases = ["x^2 - y^3", "x^2 - y^5", "(x - y^2)*(x - 2*y^2)*(x - y^3)", "x - y"]
    for text in cases:
        field, f, e = expand(text, 24)
        for b in e.branches:
            xs = series_fractions(b.x)
            ys = {Fraction(b.ram): Fraction(1)}
            assert sympy_compose(text, xs, ys) == {}, f"nonzero composition for {text}"


def test_separated_branches_compose_to_zero_via_sympy():
    text = "(x - y^2)*(x - y^2 - y^9)"
    field, f, e = expand(text, 24)
    for b in e.branches:
        xs = series_fractions(b.x)
        leftover = sympy_compose(text, xs, {Fraction(1): Fraction(1)})
        assert all(exp >= 24 for exp in leftover), leftover


def test_algebraic_branches_vanish_numerically():
    # roots of unity and radicals: check |f(x(t), t^m)| at a small real t
    for text, params in [("x^3 + y^4", ()), ("x^4 + y^5", ()), ("3*x^2 - 4*c*y^3", ("c",))]:
        field, f, e = expand(text, 24, params=params)
        env = numeric_env(field, seed=4)
        t0 = mpmath.mpf("0.01")
        for b in e.branches:
            for j in range(b.ram):
                # both coordinates evaluated at the same branch parameter
                xv = numeric_series(b.sheet_x(j), env, t0)
                yv = numeric_series(b.y_series(), env, t0)
                val = numeric_poly_at(f, env, xv, yv)
                assert abs(val) < mpmath.mpf("1e-80"), (text, j, abs(val))


def test_truncated_branch_residual_is_numerically_small():
    field, f, e = expand(SEPTIC_CUSP, 16)
    (b,) = e.branches
    env = numeric_env(field, seed=1)
    t0 = mpmath.mpf("0.05")
    xv = numeric_series(b.x, env, t0)
    yv = numeric_series(b.y_series(), env, t0)
    val = numeric_poly_at(f, env, xv, yv)
    # claimed residual order is 62 in t; allow slack for the constant
    assert abs(val) < t0 ** 55
    assert abs(val) > 0


def test_conjugate_sheets_are_distinct_roots():
    field, f, e = expand("x^3 + y^4", 24)
    (b,) = e.branches
    env: dict = {}
    t0 = mpmath.mpf("0.07")
    values = [numeric_series(b.sheet_x(j), env, t0 ** 3) for j in range(3)]
    for i in range(3):
        for j in range(i + 1, 3):
            assert abs(values[i] - values[j]) > mpmath.mpf("1e-10")


# ---------------------------------------------------------------------------
# multiplicity accounting
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("text,params", RESIDUAL_CORPUS)
def test_sheet_count_matches_x_degree(text, params):
    field, f = fresh(text, params)
    e = newton_puiseux(f, 32)
    reduced_x_degree = max(ex for ex, _ in e.reduced.terms)
    assert sum(b.ram for b in e.branches) == reduced_x_degree
