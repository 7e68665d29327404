"""Polar curves of plane germs: branch pairs, contacts, tangent data.

Given a germ f and a direction (a, b), the polar curve is a*f_x + b*f_y = 0.
Its Puiseux branches are expanded (squarefree-reduced first: a polar may be
non-reduced even when f is), every conjugate sheet is enumerated, and all
unordered pairs of distinct sheets are produced on a common parameter; these
pairs are what the saturation membership engine consumes.

Also here: contact exponents and their hierarchical packets, exceptional
tangent lines (repeated linear factors of the initial form of f), leading
ratios of f and f_y along sheet pairs, and the consistency check tying those
ratios together for pairs of polar branches tangent to one exceptional line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .algebra import Field, FieldElem
from .errors import (
    HypothesisUnmet,
    IndeterminateOrder,
    NotIsolated,
    PrecisionExceeded,
    UnsupportedExtension,
)
from .polynomials import Polynomial
from .puiseux import Branch, CurveExpansion, default_precision, newton_puiseux
from .series import INF, OrderValue, PuiseuxSeries


# --------------------------------------------------------------------------
# pair curves
# --------------------------------------------------------------------------


class PairCurve:
    """Two parametrized germs phi_1, phi_2 on a common parameter t."""

    __slots__ = ("x1", "y1", "x2", "y2", "label")

    def __init__(self, x1, y1, x2, y2, label: Optional[dict] = None):
        self.x1 = x1
        self.y1 = y1
        self.x2 = x2
        self.y2 = y2
        self.label = label

    def diffs(self) -> tuple[PuiseuxSeries, PuiseuxSeries]:
        return self.x1 - self.x2, self.y1 - self.y2

    def delta(self) -> tuple[PuiseuxSeries, str]:
        """A minimal-order generator of the ideal (x1-x2, y1-y2)."""
        dx, dy = self.diffs()
        ox, oy = dx.order(), dy.order()
        if ox.is_zero and oy.is_zero:
            raise HypothesisUnmet(
                "the two parametrizations coincide; the pair imposes no condition"
            )
        if ox.is_zero:
            if not oy.is_exact:
                raise IndeterminateOrder(
                    "separation order of the pair is unresolved", lower_bound=oy.value
                )
            return dy, "y"
        if oy.is_zero:
            if not ox.is_exact:
                raise IndeterminateOrder(
                    "separation order of the pair is unresolved", lower_bound=ox.value
                )
            return dx, "x"
        # both nonzero-ish: need the minimum to be exact
        if ox.is_exact and (oy.is_exact and ox.value <= oy.value or oy.is_bound and oy.value >= ox.value):
            return dx, "x"
        if oy.is_exact and (ox.is_exact and oy.value < ox.value or ox.is_bound and ox.value >= oy.value):
            return dy, "y"
        raise IndeterminateOrder(
            "separation order of the pair is unresolved",
            lower_bound=min(v for v in (ox.value, oy.value) if v is not None),
        )

    def common_parameter_check(self) -> bool:
        return (self.y1 - self.y2).is_identically_zero()

    def describe(self) -> dict:
        out = {
            "x1": str(self.x1),
            "y1": str(self.y1),
            "x2": str(self.x2),
            "y2": str(self.y2),
        }
        if self.label:
            out["label"] = dict(self.label)
        return out


@dataclass
class PolarPair:
    branch1: int
    sheet1: int
    branch2: int
    sheet2: int
    curve: PairCurve


# --------------------------------------------------------------------------
# polar construction
# --------------------------------------------------------------------------


def germ_check(f: Polynomial) -> None:
    if f.is_zero():
        raise HypothesisUnmet("the zero polynomial is not a curve germ")
    if not f.constant_term().is_zero():
        raise HypothesisUnmet("the curve does not pass through the origin")
    if not f.is_squarefree():
        raise NotIsolated("the curve has a repeated component (not reduced)")


def normalize_direction(
    field: Field, direction: tuple[FieldElem, FieldElem]
) -> tuple[FieldElem, FieldElem]:
    """Projective normalization: leading nonzero coordinate scaled to 1."""
    a, b = direction
    if not a.is_zero():
        return (field.one, b / a)
    if b.is_zero():
        raise HypothesisUnmet("a polar direction must be nonzero")
    return (field.zero, field.one)


def generic_direction(field: Field, taken: Sequence[str] = ()) -> tuple[FieldElem, FieldElem, str]:
    """Direction (1, -c) with a fresh parameter name."""
    used = set(taken) | set(field.parameters())
    for name in ["c"] + [f"c{i}" for i in range(1000)]:
        if name not in used:
            c = field.parameter(name)
            return field.one, -c, name
    raise UnsupportedExtension("no fresh parameter name available")


def polar_poly(f: Polynomial, direction: tuple[FieldElem, FieldElem]) -> Polynomial:
    a, b = direction
    return f.partial("x").scale(a) + f.partial("y").scale(b)


def shared_component_check(f: Polynomial, polar: Polynomial) -> None:
    if polar.is_zero():
        raise NotIsolated("the polar curve vanishes identically")
    if polar.is_constant():
        return
    g = f.gcd(polar)
    if not g.is_constant():
        raise NotIsolated(
            "the curve and its polar share a component; the singularity "
            "is not isolated in the required sense"
        )


_EXPANSION_CACHE: dict[tuple[int, str, int], CurveExpansion] = {}


def polar_expansion(polar: Polynomial, precision: int) -> CurveExpansion:
    key = (id(polar.field), str(polar), precision)
    got = _EXPANSION_CACHE.get(key)
    if got is None:
        got = newton_puiseux(polar, precision)
        _EXPANSION_CACHE[key] = got
    return got


def _repower(series: PuiseuxSeries, k: int) -> PuiseuxSeries:
    """Substitute t -> t^k into an integer-exponent series."""
    if k == 1:
        return series
    if series.ram != 1:
        raise ValueError("repower expects integer exponents")
    t = series.trunc if series.trunc is INF else series.trunc * k
    return PuiseuxSeries(series.field, 1, {key * k: c for key, c in series.terms.items()}, t)


def sheets_of(expansion: CurveExpansion) -> list[tuple[int, int]]:
    out = []
    for bi, br in enumerate(expansion.branches):
        for j in range(br.ram):
            out.append((bi, j))
    return out


def pair_of_sheets(expansion: CurveExpansion, b1: int, j1: int, b2: int, j2: int) -> PairCurve:
    field = expansion.branches[b1].field
    br1, br2 = expansion.branches[b1], expansion.branches[b2]
    M = br1.ram * br2.ram // math.gcd(br1.ram, br2.ram)
    k1, k2 = M // br1.ram, M // br2.ram
    x1 = _repower(br1.sheet_x(j1), k1)
    x2 = _repower(br2.sheet_x(j2), k2)
    y = PuiseuxSeries(field, 1, {M: field.one}, INF)
    label = {"branch1": b1, "sheet1": j1, "branch2": b2, "sheet2": j2, "ram": M}
    return PairCurve(x1, y, x2, y, label)


def polar_pairs(expansion: CurveExpansion) -> list[PolarPair]:
    """All unordered pairs of distinct sheets, deterministically ordered."""
    sheets = sheets_of(expansion)
    out = []
    for idx1 in range(len(sheets)):
        for idx2 in range(idx1 + 1, len(sheets)):
            b1, j1 = sheets[idx1]
            b2, j2 = sheets[idx2]
            curve = pair_of_sheets(expansion, b1, j1, b2, j2)
            out.append(PolarPair(b1, j1, b2, j2, curve))
    return out


# --------------------------------------------------------------------------
# contacts and packets
# --------------------------------------------------------------------------


def sheet_contact(expansion: CurveExpansion, b1: int, j1: int, b2: int, j2: int) -> Fraction:
    """Contact exponent (in y-order units) of two distinct sheets."""
    pc = pair_of_sheets(expansion, b1, j1, b2, j2)
    delta, _ = pc.delta()
    ov = delta.order()
    M = pc.label["ram"]
    return ov.value / M


def branch_contact(expansion: CurveExpansion, b1: int, b2: int) -> Fraction:
    """Contact of two branches: the best contact among sheet pairs."""
    best: Optional[Fraction] = None
    br2 = expansion.branches[b2]
    for j in range(br2.ram):
        c = sheet_contact(expansion, b1, 0, b2, j)
        if best is None or c > best:
            best = c
    return best


def contact_matrix(expansion: CurveExpansion) -> dict[tuple[int, int], Fraction]:
    out = {}
    n = len(expansion.branches)
    for i in range(n):
        for k in range(i + 1, n):
            out[(i, k)] = branch_contact(expansion, i, k)
    return out


def packets(expansion: CurveExpansion) -> list[dict]:
    """Nested partitions of the branches, one level per distinct contact."""
    n = len(expansion.branches)
    if n == 0:
        return []
    contacts = contact_matrix(expansion)
    levels = sorted({v for v in contacts.values()}, reverse=True)
    out = []
    for theta in levels:
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for (i, k), c in contacts.items():
            if c >= theta:
                parent[find(i)] = find(k)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        out.append(
            {
                "contact": theta,
                "groups": sorted(groups.values()),
            }
        )
    return out


# --------------------------------------------------------------------------
# tangents and exceptional lines
# --------------------------------------------------------------------------


def tangent_of_branch(branch: Branch) -> dict:
    """The tangent line of a branch: x = 0, y = 0, or x = lambda*y."""
    ov = branch.x.order()
    m = branch.ram
    if ov.is_zero or (ov.value is not None and ov.value > m):
        # order certainly exceeds m (an at_least bound above m suffices)
        return {"line": "x", "slope": None}
    if not ov.is_exact:
        raise PrecisionExceeded("tangent direction unresolved at this precision")
    if ov.value < m:
        return {"line": "y", "slope": None}
    lam = branch.x.coeff(Fraction(m))
    return {"line": "slope", "slope": lam}


def _root_multiplicity(p: Polynomial, lam: FieldElem) -> int:
    """Multiplicity of the line x = lam*y in a binary form p(x, y)."""
    field = p.field
    one_y = field.one
    k = 0
    q = p
    while not q.is_zero():
        val = q.evaluate({"x": lam, "y": one_y})
        if not val.is_zero():
            return k
        q = q.partial("x")
        k += 1
    return k


def exceptional_lines(f: Polynomial) -> list[dict]:
    """Repeated linear factors of the initial form of f."""
    init = f.initial_form()
    a, rest = init.strip_var("x")
    b, rest = rest.strip_var("y")
    out = []
    if a >= 2:
        out.append({"line": "x", "slope": None, "multiplicity": a})
    if b >= 2:
        out.append({"line": "y", "slope": None, "multiplicity": b})
    if rest.total_degree() >= 2:
        px = rest.partial("x")
        if not px.is_zero():
            g = rest.gcd(px)
            if not g.is_constant():
                # repeated slopes are among the roots of the gcd in x/y
                gy = g
                deg = gy.degree_in("x")
                face = []
                for e, c in gy.terms.items():
                    face.append((e[0], c))
                from .puiseux import _face_roots

                roots = _face_roots(f.field, face)
                for lam in roots:
                    mult = _root_multiplicity(rest, lam)
                    if mult >= 2:
                        out.append({"line": "slope", "slope": lam, "multiplicity": mult})
    return out


def _same_line(t1: dict, t2: dict) -> bool:
    if t1["line"] != t2["line"]:
        return False
    if t1["line"] == "slope":
        return t1["slope"] == t2["slope"]
    return True


def _line_is_exceptional(tangent: dict, lines: list[dict]) -> bool:
    return any(_same_line(tangent, ln) for ln in lines)


# --------------------------------------------------------------------------
# leading data of f and f_y along sheets
# --------------------------------------------------------------------------


def _leading_of(series: PuiseuxSeries, what: str) -> tuple[Fraction, FieldElem]:
    ov = series.order()
    if not ov.is_exact:
        raise PrecisionExceeded(f"leading term of {what} unresolved at this precision")
    return series.leading()


def sheet_leading_data(f: Polynomial, expansion: CurveExpansion, bi: int, j: int) -> dict:
    """Orders and leading coefficients of f and f_y along one sheet."""
    br = expansion.branches[bi]
    x, y = br.parametrization(j)
    m = br.ram
    comp_f = f.subs_series({"x": x, "y": y})
    comp_fy = f.partial("y").subs_series({"x": x, "y": y})
    pf, cf = _leading_of(comp_f, "f along the sheet")
    pfy, cfy = _leading_of(comp_fy, "f_y along the sheet")
    return {
        "branch": bi,
        "sheet": j,
        "ram": m,
        "ord_f_t": pf,
        "ord_f_y_units": pf / m,
        "lead_f": cf,
        "ord_fy_t": pfy,
        "ord_fy_y_units": pfy / m,
        "lead_fy": cfy,
        "tangent": tangent_of_branch(br),
    }


@dataclass
class PairGeometry:
    """Orders attached to a pair, y-normalized (ord y = 1) and in t-units."""

    e1: Union[Fraction, float]  # order of f_y along phi_1 (INF if it vanishes)
    e2: Union[Fraction, float]
    contact: Union[Fraction, float]  # order of x.phi_1 - x.phi_2
    delta_ord: Union[Fraction, float]  # min over both coordinate differences
    m: int  # t-exponents per y-unit (order of y along phi_1)
    e1_t: Union[Fraction, float]
    e2_t: Union[Fraction, float]
    contact_t: Union[Fraction, float]
    delta_t: Union[Fraction, float]

    def swapped(self) -> "PairGeometry":
        return PairGeometry(
            self.e2, self.e1, self.contact, self.delta_ord, self.m,
            self.e2_t, self.e1_t, self.contact_t, self.delta_t,
        )


def _geometry_order(series: PuiseuxSeries, what: str) -> Union[Fraction, float]:
    ov = series.order()
    if ov.is_zero:
        return INF
    if not ov.is_exact:
        raise IndeterminateOrder(
            f"order of {what} unresolved at this precision", lower_bound=ov.value
        )
    return ov.value


def pair_geometry(f: Polynomial, pair: PairCurve) -> PairGeometry:
    fy = f.partial("y")
    fy1 = fy.subs_series({"x": pair.x1, "y": pair.y1})
    fy2 = fy.subs_series({"x": pair.x2, "y": pair.y2})
    e1_t = _geometry_order(fy1, "f_y along the first sheet")
    e2_t = _geometry_order(fy2, "f_y along the second sheet")
    xdiff, ydiff = pair.diffs()
    c_t = _geometry_order(xdiff, "the x-coordinate difference")
    yd_t = _geometry_order(ydiff, "the y-coordinate difference")
    delta_t = min(c_t, yd_t)
    m_ord = pair.y1.order()
    if not m_ord.is_exact:
        raise IndeterminateOrder("order of y along the pair unresolved")
    m = m_ord.value
    return PairGeometry(
        e1=e1_t / m,
        e2=e2_t / m,
        contact=c_t / m,
        delta_ord=delta_t / m,
        m=int(m) if m.denominator == 1 else m,
        e1_t=e1_t,
        e2_t=e2_t,
        contact_t=c_t,
        delta_t=delta_t,
    )


def hp_data(f: Polynomial, line: dict, expansion: CurveExpansion) -> dict:
    """Initial terms of f along every polar sheet tangent to the line, and
    the pairwise coefficient ratios where the exponents agree."""
    sheets = []
    for bi, br in enumerate(expansion.branches):
        if _same_line(tangent_of_branch(br), line):
            for j in range(br.ram):
                sheets.append((bi, j))
    records = [sheet_leading_data(f, expansion, bi, j) for bi, j in sheets]
    ratios = []
    for a in range(len(records)):
        for b in range(a + 1, len(records)):
            d1, d2 = records[a], records[b]
            if d1["ord_f_y_units"] != d2["ord_f_y_units"]:
                continue
            ratios.append(
                {
                    "sheet1": (d1["branch"], d1["sheet"]),
                    "sheet2": (d2["branch"], d2["sheet"]),
                    "ord_f_y_units": d1["ord_f_y_units"],
                    "ratio": d2["lead_f"] / d1["lead_f"],
                }
            )
    return {"line": line, "sheets": records, "ratios": ratios}


def hp_report(f: Polynomial, expansion: CurveExpansion) -> list[dict]:
    """Leading-ratio data for every unordered sheet pair of the polar."""
    sheets = sheets_of(expansion)
    data = {sh: sheet_leading_data(f, expansion, *sh) for sh in sheets}
    out = []
    for a in range(len(sheets)):
        for b in range(a + 1, len(sheets)):
            d1, d2 = data[sheets[a]], data[sheets[b]]
            out.append(
                {
                    "pair": {
                        "branch1": d1["branch"],
                        "sheet1": d1["sheet"],
                        "branch2": d2["branch"],
                        "sheet2": d2["sheet"],
                    },
                    "ord_f": (d1["ord_f_y_units"], d2["ord_f_y_units"]),
                    "ratio_f": d2["lead_f"] / d1["lead_f"],
                    "ord_fy": (d1["ord_fy_y_units"], d2["ord_fy_y_units"]),
                    "ratio_fy": d2["lead_fy"] / d1["lead_fy"],
                }
            )
    return out


def pair_tangent_report(
    f: Polynomial, expansion: CurveExpansion, b1: int, b2: int
) -> dict:
    """Leading-ratio consistency for two polar branches tangent to a common
    exceptional line (not the x-axis): the order shifts of f and f_y along
    them must agree, and the initial term of the f-ratio must equal the
    initial term of the f_y-ratio corrected by the order quotient p1/p2.
    """
    t1 = tangent_of_branch(expansion.branches[b1])
    t2 = tangent_of_branch(expansion.branches[b2])
    if not _same_line(t1, t2):
        raise HypothesisUnmet("the two branches are not tangent to a common line")
    if t1["line"] == "y":
        raise HypothesisUnmet("the common tangent is the x-axis")
    if not _line_is_exceptional(t1, exceptional_lines(f)):
        raise HypothesisUnmet("the common tangent is not an exceptional line")
    d1 = sheet_leading_data(f, expansion, b1, 0)
    d2 = sheet_leading_data(f, expansion, b2, 0)
    lo, hi = (d1, d2) if d1["ord_f_y_units"] <= d2["ord_f_y_units"] else (d2, d1)
    p_lo, p_hi = lo["ord_f_y_units"], hi["ord_f_y_units"]
    e_lo, e_hi = lo["ord_fy_y_units"], hi["ord_fy_y_units"]
    ratio_f = hi["lead_f"] / lo["lead_f"]
    ratio_fy = hi["lead_fy"] / lo["lead_fy"]
    deg_f = p_hi - p_lo
    deg_fy = e_hi - e_lo
    factor = f.field.rational(Fraction(p_lo) / Fraction(p_hi))
    corrected_equal = ratio_f == factor * ratio_fy
    return {
        "branches": (min(b1, b2), max(b1, b2)),
        "tangent": t1,
        "ord_f": (p_lo, p_hi),
        "ord_fy": (e_lo, e_hi),
        "ratio_f": ratio_f,
        "ratio_fy": ratio_fy,
        "deg_ratio_f": deg_f,
        "deg_ratio_fy": deg_fy,
        "degree_match": deg_f == deg_fy,
        "initial_terms_equal": ratio_f == ratio_fy,
        "corrected_equal": corrected_equal,
        "ok": deg_f == deg_fy and corrected_equal,
    }


def tangent_ratio_check(f: Polynomial, expansion: CurveExpansion) -> list[dict]:
    """pair_tangent_report over every qualifying unordered branch pair."""
    lines = exceptional_lines(f)
    n = len(expansion.branches)
    tangents = [tangent_of_branch(expansion.branches[bi]) for bi in range(n)]
    out = []
    for i in range(n):
        for k in range(i + 1, n):
            ti, tk = tangents[i], tangents[k]
            if not _same_line(ti, tk):
                continue
            if ti["line"] == "y":
                continue  # tangent is the x-axis: out of scope
            if not _line_is_exceptional(ti, lines):
                continue
            out.append(pair_tangent_report(f, expansion, i, k))
    return out
