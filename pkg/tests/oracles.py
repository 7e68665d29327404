"""Independent verification helpers for the test suite.

Everything here re-derives results through a second route -- plain Fraction
linear algebra, sympy expansion, or high-precision numerics -- so that the
engine under test is never used to check itself.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import sympy

from lipsat import PairVector
from lipsat.series import PuiseuxSeries


# ---------------------------------------------------------------------------
# exact rational views of series
# ---------------------------------------------------------------------------


def elem_fraction(e) -> Fraction:
    """A field element as a Fraction; raises ValueError when not rational."""
    return Fraction(str(e))


def series_fractions(s: PuiseuxSeries) -> dict[Fraction, Fraction]:
    """{exponent: coefficient} for a series with rational coefficients."""
    return {Fraction(k, s.ram): elem_fraction(c) for k, c in s.terms.items()}


# ---------------------------------------------------------------------------
# module membership by Fraction-matrix elimination
# ---------------------------------------------------------------------------


def oracle_member(gens: list[PairVector], v: PairVector, cap: Fraction) -> bool:
    """Decide v in sum_g C{t}.g modulo t^cap by solving the linear system
    for the multiplier coefficients with exact Gaussian elimination."""
    all_series = [v.first, v.second]
    for g in gens:
        all_series.extend((g.first, g.second))
    M = 1
    for s in all_series:
        M = M * s.ram // math.gcd(M, s.ram)
    capk = int(Fraction(cap) * M)

    def lattice(s: PuiseuxSeries) -> dict[int, Fraction]:
        return {int(e * M): c for e, c in series_fractions(s).items()}

    gcoef = [(lattice(g.first), lattice(g.second)) for g in gens]
    vcoef = (lattice(v.first), lattice(v.second))

    # unknowns: multiplier coefficients a_{g,k} of t^{k/M}, 0 <= k <= capk
    width = len(gens) * (capk + 1)
    rows: list[list[Fraction]] = []
    for comp in (0, 1):
        for e in range(capk + 1):
            row = [Fraction(0)] * (width + 1)
            for gi, gpair in enumerate(gcoef):
                for ge, gc in gpair[comp].items():
                    k = e - ge
                    if 0 <= k <= capk:
                        row[gi * (capk + 1) + k] += gc
            row[width] = vcoef[comp].get(e, Fraction(0))
            rows.append(row)

    rank = 0
    for col in range(width):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = 1 / rows[rank][col]
        rows[rank] = [x * inv for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return not any(
        all(x == 0 for x in row[:-1]) and row[-1] != 0 for row in rows
    )


# ---------------------------------------------------------------------------
# composition oracle through sympy
# ---------------------------------------------------------------------------


def sympy_compose(poly_text: str, x_terms: dict, y_terms: dict) -> dict:
    """Expand poly(x(t), y(t)) with sympy; terms are rational exponent maps.

    Returns {Fraction exponent: Fraction coefficient} of the result."""
    t = sympy.Symbol("t")
    x, y = sympy.symbols("x y")
    expr = sympy.sympify(poly_text.replace("^", "**"), {"x": x, "y": y})
    xs = sum(sympy.Rational(c) * t ** sympy.Rational(e) for e, c in x_terms.items())
    ys = sum(sympy.Rational(c) * t ** sympy.Rational(e) for e, c in y_terms.items())
    expanded = sympy.expand(expr.subs({x: xs, y: ys}, simultaneous=True))
    out: dict[Fraction, Fraction] = {}
    for term in sympy.Add.make_args(expanded):
        coeff, exp = term.as_coeff_exponent(t)
        c, e = Fraction(str(coeff)), Fraction(str(exp))
        if c:
            out[e] = out.get(e, Fraction(0)) + c
    return {e: c for e, c in out.items() if c}


# ---------------------------------------------------------------------------
# numeric embedding: parameters, roots of unity, and radicals as numbers
# ---------------------------------------------------------------------------

mpmath.mp.dps = 120


def numeric_env(field, seed: int = 1) -> dict:
    """Complex values for each parameter, then each radical in adjunction
    order as the principal root of its (already numeric) radicand."""
    env: dict[str, mpmath.mpc] = {}
    for i, name in enumerate(field.parameters()):
        env[name] = mpmath.mpc("0.31", "0.17") + (seed + i) * mpmath.mpf("0.083")
    for sym in field.radicals():
        base = numeric_elem(sym.radicand, env)
        env[sym.name] = mpmath.power(base, mpmath.mpf(1) / sym.degree)
    return env


def numeric_cyclo(c) -> mpmath.mpc:
    total = mpmath.mpc(0)
    for k, q in enumerate(c.coords):
        if q:
            total += mpmath.mpf(q.numerator) / q.denominator * mpmath.exp(
                2j * mpmath.pi * k / c.order
            )
    return total


def _numeric_poly(p: dict, env: dict) -> mpmath.mpc:
    total = mpmath.mpc(0)
    for mono, coeff in p.items():
        term = numeric_cyclo(coeff)
        for name, exp in mono:
            term *= mpmath.power(env[name], exp)
        total += term
    return total


def numeric_elem(e, env: dict) -> mpmath.mpc:
    return _numeric_poly(e.num, env) / _numeric_poly(e.den, env)


def numeric_series(s: PuiseuxSeries, env: dict, tval) -> mpmath.mpc:
    total = mpmath.mpc(0)
    for k, c in s.terms.items():
        total += numeric_elem(c, env) * mpmath.power(tval, mpmath.mpf(k) / s.ram)
    return total


def numeric_poly_at(poly, env: dict, xv, yv) -> mpmath.mpc:
    total = mpmath.mpc(0)
    for exps, coeff in poly.terms.items():
        total += (
            numeric_elem(coeff, env)
            * mpmath.power(xv, exps[0])
            * mpmath.power(yv, exps[1])
        )
    return total
