"""Monomial criteria for the two-variable weighted-homogeneous germs
x^p + y^q, and the wedge of monomials where the saturation condition holds
while the weighted-degree condition fails.

Everything here is exact integer arithmetic; the optional engine
cross-validation re-derives each verdict symbolically via the membership
engine on the generic polar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import HypothesisUnmet


@dataclass(frozen=True)
class WeightSystem:
    """Weights making x^p and y^q both of degree d = pq."""

    wx: int
    wy: int
    d: int

    @staticmethod
    def for_exponents(p: int, q: int) -> "WeightSystem":
        return WeightSystem(wx=q, wy=p, d=p * q)

    def weight(self, i: int, j: int) -> int:
        return i * self.wx + j * self.wy


@dataclass
class MonomialVerdictRow:
    i: int
    j: int
    lipsat_inequality: bool
    fr_inequality: bool
    engine_verdict: Optional[str] = None

    @property
    def wedge(self) -> bool:
        return self.lipsat_inequality and not self.fr_inequality


def _check_exponents(p: int, q: int, *, need_coprime: bool) -> None:
    if not (isinstance(p, int) and isinstance(q, int) and 2 <= p < q):
        raise HypothesisUnmet(f"exponents must satisfy 2 <= p < q, got ({p}, {q})")
    if need_coprime and math.gcd(p - 1, q - 1) != 1:
        raise HypothesisUnmet(
            f"gcd(p-1, q-1) = {math.gcd(p - 1, q - 1)} != 1: the generic polar "
            "is not irreducible, so the monomial criterion does not apply"
        )


def lipsat_monomial(p: int, q: int, i: int, j: int) -> bool:
    """Does x^i y^j belong to the saturated Jacobian ideal of x^p + y^q?"""
    _check_exponents(p, q, need_coprime=True)
    if i == 0:
        return j >= q
    return i * (q - 1) + j * (p - 1) >= (q - 1) * (p - 1) + (q - 1)


def fr_monomial(p: int, q: int, i: int, j: int) -> bool:
    """The weighted-degree condition: w(x^i y^j) >= d + q - p."""
    ws = WeightSystem.for_exponents(p, q)
    return ws.weight(i, j) >= ws.d + q - p


def j0_bounds(p: int, q: int) -> dict:
    """The two lower bounds on i at j = 0: exact thresholds of each criterion."""
    return {
        "lipsat": Fraction(p),
        "fr": Fraction(p * q + q - p, q),
        "fr_alternate_reading": Fraction(p * p + q - p, p),
    }


def engine_applicable(p: int, i: int) -> bool:
    """Rows where the symbolic engine verdict is directly comparable:
    i >= 1 and i not a multiple of p - 1 (where the extremal determinant
    identity resolves the membership unconditionally)."""
    return i >= 1 and i % (p - 1) != 0


def wedge_table(
    p: int,
    q: int,
    bound: int,
    *,
    verify: bool = False,
    precision: Optional[int] = None,
    max_precision: int = 512,
) -> list[MonomialVerdictRow]:
    """All rows (i, j) with i + j <= bound, lexicographic in (i, j).

    With verify=True, rows where the engine verdict is comparable get
    engine_verdict filled by a full symbolic run on x^p + y^q.
    """
    _check_exponents(p, q, need_coprime=True)
    rows: list[MonomialVerdictRow] = []
    for i in range(bound + 1):
        for j in range(bound + 1 - i):
            rows.append(
                MonomialVerdictRow(
                    i,
                    j,
                    lipsat_monomial(p, q, i, j),
                    fr_monomial(p, q, i, j),
                )
            )
    if verify:
        from .algebra import Field
        from .polynomials import ring
        from .saturation import check_saturation_polar

        field = Field()
        x, y = ring(field, ("x", "y"))
        f = x**p + y**q
        for row in rows:
            if not engine_applicable(p, row.i):
                continue
            g = x**row.i * y**row.j
            report = check_saturation_polar(
                f, g, precision=precision, max_precision=max_precision
            )
            row.engine_verdict = report.verdict
    return rows
