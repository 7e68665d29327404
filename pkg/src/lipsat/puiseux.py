"""Newton polygon expansion of plane curve germs into Puiseux branches.

A germ f(x, y) is expanded into fractional power series x = phi(y); each
branch is returned as a parametrization (x(t), y = t^m) with integer
exponents, m the ramification index.  The expansion is exact whenever the
branch is a polynomial in t (the recursion bottoms out on an axis factor);
otherwise the series carries an explicit truncation bound and downstream
order computations degrade to honest lower bounds.

Face polynomials are split along two supported routes: binomials (one k-th
root adjoined, all k conjugate roots enumerated through zeta_k) and rational
root extraction.  Anything else raises UnsupportedExtension rather than
guessing.

Conjugate sheets t -> zeta_m^j t of one branch are recognized and grouped;
a conjugacy class whose size disagrees with the ramification index means two
branches were still indistinguishable at the working precision, which raises
PrecisionExceeded so callers can escalate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .algebra import Cyclotomic, Field, FieldElem
from .errors import (
    InternalCriterionMismatch,
    PrecisionExceeded,
    UnsupportedExtension,
)
from .polynomials import Polynomial
from .series import INF, OrderValue, PuiseuxSeries


class Branch:
    """One Puiseux branch: x = x(t), y = t^ram, with conjugate sheets."""

    __slots__ = ("field", "x", "ram", "path")

    def __init__(self, field: Field, x: PuiseuxSeries, ram: int, path: tuple):
        self.field = field
        self.x = x
        self.ram = ram
        self.path = path

    def y_series(self) -> PuiseuxSeries:
        return PuiseuxSeries(self.field, 1, {self.ram: self.field.one}, INF)

    def sheet_x(self, j: int) -> PuiseuxSeries:
        """The x-series of the sheet obtained by t -> zeta_ram^j t."""
        return _twist(self.x, self.ram, j)

    def parametrization(self, j: int = 0) -> tuple[PuiseuxSeries, PuiseuxSeries]:
        return self.sheet_x(j), self.y_series()

    def is_exact(self) -> bool:
        return self.x.is_exact()

    def describe(self) -> dict:
        return {"x": str(self.x), "y": f"1*t^{self.ram}" if self.ram != 1 else "1*t", "ram": self.ram}

    def __repr__(self):
        return f"Branch(x={self.x}, y=t^{self.ram})"


def _twist(x: PuiseuxSeries, m: int, j: int) -> PuiseuxSeries:
    """Reparametrize t -> zeta_m^j t on an integer-exponent series."""
    j %= m
    if j == 0 or m == 1:
        return x
    if x.ram != 1:
        raise InternalCriterionMismatch("sheet series must have integer exponents")
    field = x.field
    terms = {}
    for k, c in x.terms.items():
        z = Cyclotomic.root(m, (j * k) % m)
        terms[k] = c * field.from_cyclotomic(z)
    return PuiseuxSeries(field, 1, terms, x.trunc)


@dataclass
class CurveExpansion:
    source: Polynomial
    reduced: Polynomial
    vertical_multiplicity: int
    branches: list
    precision: int

    def branch_pairs(self):
        """All unordered sheet pairs across and within branches; see polar.py."""
        raise NotImplementedError("use polar.polar_pairs")


class _Sheet:
    __slots__ = ("terms", "prec", "ram", "path")

    def __init__(self, terms: dict, prec, ram: int, path: tuple):
        self.terms = terms  # Fraction exponent -> FieldElem, y-units
        self.prec = prec  # exclusive bound in y-units, Fraction or INF
        self.ram = ram
        self.path = path


def _newton_edges(support) -> list:
    """Negative-slope edges of the lower Newton polygon."""
    byi: dict[int, int] = {}
    for i, j in support:
        if i not in byi or j < byi[i]:
            byi[i] = j
    pts = sorted(byi.items())
    hull: list[tuple[int, int]] = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (p[0] - x2) >= (p[1] - y2) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    return [
        (hull[k], hull[k + 1])
        for k in range(len(hull) - 1)
        if hull[k + 1][1] < hull[k][1]
    ]


def _rational_root_extraction(coeffs: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """All rational roots (distinct, ascending) and the remaining cofactor."""
    den_lcm = 1
    for c in coeffs:
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    ints = [int(c * den_lcm) for c in coeffs]
    a0, an = abs(ints[0]), abs(ints[-1])

    def divisors(n: int) -> list[int]:
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                out.append(n // d)
            d += 1
        return sorted(set(out))

    candidates = sorted(
        {
            Fraction(sp * p, q)
            for p in divisors(a0)
            for q in divisors(an)
            for sp in (1, -1)
        }
    )

    def evaluate(cs: list[Fraction], r: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(cs):
            acc = acc * r + c
        return acc

    def deflate(cs: list[Fraction], r: Fraction) -> list[Fraction]:
        # cs = (z - r) * q: synthetic division from the top
        out = [Fraction(0)] * (len(cs) - 1)
        carry = Fraction(0)
        for k in range(len(cs) - 1, 0, -1):
            carry = cs[k] + carry * r if k == len(cs) - 1 else cs[k] + carry * r
            out[k - 1] = carry
        return out

    roots: list[Fraction] = []
    work = list(coeffs)
    for r in candidates:
        while len(work) > 1 and evaluate(work, r) == 0:
            if r not in roots:
                roots.append(r)
            work = deflate(work, r)
    return sorted(roots), work


def _face_roots(field: Field, face: list[tuple[int, FieldElem]]) -> list[FieldElem]:
    """Distinct nonzero roots of a face polynomial, in a deterministic order."""
    face = sorted(face, key=lambda p: p[0])
    e0 = face[0][0]
    shifted = [(e - e0, c) for e, c in face]
    if len(shifted) == 1:
        return []
    if len(shifted) == 2:
        (_, c0), (k, ck) = shifted
        w0 = -(c0 / ck)
        if k == 1:
            return [w0]
        base = field.adjoin_radical(w0, k)
        return [field.zeta(k, j) * base if j else base for j in range(k)]
    if all(c.is_rational() for _, c in shifted):
        deg = shifted[-1][0]
        coeffs = [Fraction(0)] * (deg + 1)
        for e, c in shifted:
            coeffs[e] = c.rational_value()
        roots, rest = _rational_root_extraction(coeffs)
        out = [field.rational(r) for r in roots]
        nz = [(e, c) for e, c in enumerate(rest) if c]
        if len(nz) <= 1:
            return out
        if len(nz) == 2:
            (el, cl), (eh, ch) = nz
            k = eh - el
            w0 = field.rational(-cl / ch)
            if k == 1:
                return out + [w0]
            base = field.adjoin_radical(w0, k)
            return out + [field.zeta(k, j) * base if j else base for j in range(k)]
        raise UnsupportedExtension(
            "face polynomial does not split over the supported extensions "
            "(rational roots and single radicals)"
        )
    raise UnsupportedExtension(
        "face polynomial with non-rational coefficients must be a binomial"
    )


def _newton_tail(G: Polynomial, K: int, path: tuple) -> _Sheet:
    """Regular-point tail: G(0,0)=0, G_x(0,0) != 0; the unique root is integral."""
    field = G.field
    t = PuiseuxSeries(field, 1, {1: field.one}, INF)
    xc = PuiseuxSeries.zero(field)
    Gx = G.partial("x")
    exact = False
    for _ in range(200):
        raw = G.subs_series({"x": xc, "y": t})
        if raw.is_identically_zero():
            exact = xc.is_exact()
            break
        num = raw.truncated(K)
        if not num.terms:
            break
        den = Gx.subs_series({"x": xc, "y": t})
        xc = (xc - num.divide(den, Fraction(K))).truncated(K)
    else:
        raise PrecisionExceeded("regular-point iteration failed to converge")
    terms = {Fraction(k): c for k, c in xc.terms.items()}
    return _Sheet(terms, INF if exact else Fraction(K), 1, path)


def _expand_inner(F: Polynomial, K: int, path: tuple) -> list[_Sheet]:
    if K <= 0:
        raise PrecisionExceeded("working precision exhausted during expansion")
    field = F.field
    s, G = F.strip_var("x")
    if s > 1:
        raise InternalCriterionMismatch("repeated axis component in a squarefree expansion")
    sheets: list[_Sheet] = []
    if s:
        sheets.append(_Sheet({}, INF, 1, path + (("axis",),)))
    if G.degree_in("x") == 0 or not G.constant_term().is_zero():
        return sheets
    lin = G.terms.get((1, 0))
    if lin is not None and not lin.is_zero():
        sheets.append(_newton_tail(G, K, path + (("tail",),)))
        _check_count(G, sheets, s)
        return sheets
    xv = Polynomial.variable(field, F.vars, "x")
    yv = Polynomial.variable(field, F.vars, "y")
    edges = _newton_edges(G.terms.keys())
    for edge_idx, ((iL, jL), (iR, jR)) in enumerate(edges):
        rise, run = jL - jR, iR - iL
        g = math.gcd(rise, run)
        a, d = rise // g, run // g
        value = iL * a + jL * d
        face = [
            (i - iL, c)
            for (i, j), c in G.terms.items()
            if iL <= i <= iR and i * a + j * d == value
        ]
        # lattice points on the edge are spaced d apart in i, so the face
        # polynomial lives in z^d; solving in w = z^d yields one root per
        # branch, with the d conjugate sheets carried by the ramification
        if any(e % d for e, _ in face):
            raise InternalCriterionMismatch("edge support not on the d-lattice")
        reduced_face = [(e // d, c) for e, c in face]
        w_roots = _face_roots(field, reduced_face)
        roots = []
        for w0 in w_roots:
            if d == 1:
                roots.append(w0)
            else:
                roots.append(field.adjoin_radical(w0, d))
        K_child = K * d - a
        for root_idx, z0 in enumerate(roots):
            sub_x = (Polynomial.constant(field, F.vars, z0) + xv) * yv**a
            child = G.substitute({"x": sub_x, "y": yv**d})
            ell, child = child.strip_var("y")
            if ell != value:
                raise InternalCriterionMismatch("edge value mismatch after substitution")
            for cs in _expand_inner(child, K_child, path + (("e", edge_idx, root_idx),)):
                base = Fraction(a, d)
                terms = {base + Fraction(e) / d: c for e, c in cs.terms.items()}
                terms[base] = z0
                prec = INF if cs.prec is INF else (a + cs.prec) / d
                sheets.append(_Sheet(terms, prec, d * cs.ram, cs.path))
    _check_count(G, sheets, s)
    return sheets


def _check_count(G: Polynomial, sheets: list[_Sheet], s: int) -> None:
    expected = s + min(
        (e[0] for e in G.terms if e[1] == 0),
        default=0,
    )
    got = sum(sh.ram for sh in sheets)
    if got != expected:
        raise InternalCriterionMismatch(
            f"sheet count {got} disagrees with the polygon span {expected}"
        )


def _sheet_to_series(field: Field, sheet: _Sheet) -> tuple[PuiseuxSeries, int]:
    m = 1
    for e in sheet.terms:
        m = m * e.denominator // math.gcd(m, e.denominator)
    if sheet.ram != m:
        # the exponents seen so far do not exhibit the ramification the
        # polygon path promised
        if sheet.prec is INF:
            raise InternalCriterionMismatch("exact sheet with deficient ramification")
        raise PrecisionExceeded("ramification not yet visible at this precision")
    terms = {int(e * m): c for e, c in sheet.terms.items()}
    trunc = INF if sheet.prec is INF else int(math.ceil(sheet.prec * m))
    return PuiseuxSeries(field, 1, terms, trunc), m


def _branches_of_sheets(field: Field, sheets: list[_Sheet]) -> list[Branch]:
    """Each expansion sheet represents one conjugacy class of size ram;
    two distinct sheets must never be twists of one another.

    Sheets that look like twists of an earlier one within the recorded
    terms are separated branches only beyond the cap: that is a precision
    problem (the caller escalates), not an internal inconsistency --
    unless both sheets are exact, in which case the expansion is wrong."""
    order = sorted(range(len(sheets)), key=lambda i: sheets[i].path)
    made: list[tuple[PuiseuxSeries, int]] = []
    branches = []
    for i in order:
        rep_x, m = _sheet_to_series(field, sheets[i])
        for prev_x, prev_m in made:
            if prev_m == m and _is_conjugate(prev_x, rep_x, m):
                if prev_x.is_exact() and rep_x.is_exact():
                    raise InternalCriterionMismatch(
                        "duplicate conjugacy class in the expansion"
                    )
                raise PrecisionExceeded(
                    "two branches agree within the exponent cap"
                )
        made.append((rep_x, m))
        branches.append(Branch(field, rep_x, m, sheets[i].path))
    return branches


def _is_conjugate(a: PuiseuxSeries, b: PuiseuxSeries, m: int) -> bool:
    bound = min(a.trunc_exponent(), b.trunc_exponent())
    at = a if bound is INF else a.truncated(bound)
    bt = b if bound is INF else b.truncated(bound)
    for j in range(m):
        if _twist(at, m, j).same_terms(bt):
            return True
    return False


def newton_puiseux(source: Polynomial, precision: Optional[int] = None) -> CurveExpansion:
    """Expand a plane germ into branches; vertical components are reported,
    and each branch carries one representative sheet per conjugacy class."""
    if source.is_zero():
        raise ValueError("the zero polynomial has no branch structure")
    field = source.field
    if precision is None:
        precision = default_precision(source)
    v_src, rest = source.strip_var("y")
    reduced = rest.squarefree_part()
    v2, reduced = reduced.strip_var("y")
    s, core = reduced.strip_var("x")
    branches: list[Branch] = []
    if s:
        branches.append(Branch(field, PuiseuxSeries.zero(field), 1, (("axis",),)))
    if core.degree_in("x") > 0 and core.constant_term().is_zero():
        raw = _expand_inner(core, precision, ())
        branches.extend(_branches_of_sheets(field, raw))
    branches.sort(key=lambda b: b.path)
    return CurveExpansion(source, reduced, v_src + v2, branches, precision)


def default_precision(*polys: Polynomial) -> int:
    d = 0
    for p in polys:
        d = max(d, p.total_degree())
    return 4 * max(d, 1) + 16


def branch_residual(poly: Polynomial, branch: Branch, j: int = 0) -> OrderValue:
    """Order of poly composed with a sheet of the branch (a consistency check:
    high or identically zero when the branch lies on the curve)."""
    x, y = branch.parametrization(j)
    return poly.subs_series({"x": x, "y": y}).order()
