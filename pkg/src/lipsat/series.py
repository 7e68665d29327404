"""Truncated Puiseux/Laurent series in one variable t over a coefficient field.

A series carries a ramification index m and a term dict keyed by integers k,
the key k standing for the monomial t^(k/m).  Exponents may be negative
(Laurent parts arise transiently inside module reductions).  The truncation
bound ``trunc`` is exclusive and lives in key units: keys >= trunc are unknown
and never stored.  ``trunc = math.inf`` marks an exact series -- one whose
stored terms are the whole story -- which is what makes identity-to-zero
decidable for polynomial input data.

Orders are reported as ``OrderValue``: an exact order (least exponent of a
stored term), a lower bound (no stored term, finite truncation), or the zero
series (no stored term, exact).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Union

from .algebra import Cyclotomic, Field, FieldElem
from .errors import DivisionByZero, NotAUnit

Exponent = Fraction
Trunc = Union[int, float]  # int or math.inf

INF = math.inf


class OrderValue:
    """The t-adic order of a truncated series: exact, a lower bound, or zero."""

    __slots__ = ("kind", "value")

    def __init__(self, kind: str, value: Optional[Fraction]):
        self.kind = kind  # "exact" | "at_least" | "zero"
        self.value = value

    @staticmethod
    def exact(v: Fraction) -> "OrderValue":
        return OrderValue("exact", Fraction(v))

    @staticmethod
    def at_least(v: Fraction) -> "OrderValue":
        return OrderValue("at_least", Fraction(v))

    @staticmethod
    def zero() -> "OrderValue":
        return OrderValue("zero", None)

    @property
    def is_exact(self) -> bool:
        return self.kind == "exact"

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def is_bound(self) -> bool:
        return self.kind == "at_least"

    def known_at_least(self, threshold: Fraction) -> bool:
        """True when the order is certainly >= threshold."""
        if self.kind == "zero":
            return True
        return self.value >= threshold

    def known_below(self, threshold: Fraction) -> bool:
        """True when the order is certainly < threshold."""
        return self.kind == "exact" and self.value < threshold

    def __eq__(self, other):
        if not isinstance(other, OrderValue):
            return NotImplemented
        return self.kind == other.kind and self.value == other.value

    __hash__ = None

    def __repr__(self):
        if self.kind == "zero":
            return "OrderValue(zero)"
        return f"OrderValue({self.kind} {self.value})"

    def describe(self) -> str:
        if self.kind == "zero":
            return "identically zero"
        if self.kind == "exact":
            return f"= {self.value}"
        return f">= {self.value}"


def _gcd_many(values) -> int:
    g = 0
    for v in values:
        g = math.gcd(g, v)
    return g


class PuiseuxSeries:
    __slots__ = ("field", "ram", "terms", "trunc")

    def __init__(self, field: Field, ram: int, terms: dict, trunc: Trunc = INF):
        if ram < 1:
            raise ValueError("ramification index must be positive")
        kept = {}
        for k, c in terms.items():
            if trunc is not INF and k >= trunc:
                continue
            if not c.is_zero():
                kept[k] = c
        # canonical ramification: divide out a common factor when the
        # truncation bound permits it
        if ram > 1:
            g = _gcd_many(kept.keys())
            g = math.gcd(g, ram)
            if trunc is not INF:
                g = math.gcd(g, int(trunc)) if trunc == int(trunc) else 1
            if g > 1:
                kept = {k // g: c for k, c in kept.items()}
                ram //= g
                if trunc is not INF:
                    trunc = int(trunc) // g
        self.field = field
        self.ram = ram
        self.terms = kept
        self.trunc = trunc

    # -- constructors

    @staticmethod
    def zero(field: Field) -> "PuiseuxSeries":
        return PuiseuxSeries(field, 1, {}, INF)

    @staticmethod
    def monomial(field: Field, coeff: FieldElem, exp: Fraction, trunc: Trunc = INF) -> "PuiseuxSeries":
        exp = Fraction(exp)
        m = exp.denominator
        t = trunc if trunc is INF else int(math.ceil(Fraction(trunc) * m))
        return PuiseuxSeries(field, m, {int(exp * m): coeff}, t)

    @staticmethod
    def from_exponents(field: Field, pairs: dict, trunc: Trunc = INF) -> "PuiseuxSeries":
        """pairs: {Fraction exponent -> FieldElem coefficient}; trunc in t-units."""
        m = 1
        for e in pairs:
            m = m * Fraction(e).denominator // math.gcd(m, Fraction(e).denominator)
        t = trunc if trunc is INF else int(math.ceil(Fraction(trunc) * m))
        terms = {int(Fraction(e) * m): c for e, c in pairs.items()}
        return PuiseuxSeries(field, m, terms, t)

    @staticmethod
    def unknown(field: Field, bound: Fraction) -> "PuiseuxSeries":
        """A series about which nothing is stored below the given bound."""
        b = Fraction(bound)
        return PuiseuxSeries(field, b.denominator, {}, b.numerator)

    # -- views

    def is_identically_zero(self) -> bool:
        return not self.terms and self.trunc is INF

    def is_exact(self) -> bool:
        return self.trunc is INF

    def order(self) -> OrderValue:
        if self.terms:
            k = min(self.terms)
            return OrderValue.exact(Fraction(k, self.ram))
        if self.trunc is INF:
            return OrderValue.zero()
        return OrderValue.at_least(Fraction(self.trunc, self.ram))

    def trunc_exponent(self) -> Union[Fraction, float]:
        return INF if self.trunc is INF else Fraction(self.trunc, self.ram)

    def leading(self) -> tuple[Fraction, FieldElem]:
        if not self.terms:
            raise NotAUnit("series has no visible term")
        k = min(self.terms)
        return Fraction(k, self.ram), self.terms[k]

    def coeff(self, exp: Fraction) -> FieldElem:
        e = Fraction(exp) * self.ram
        if e.denominator != 1:
            return self.field.zero
        return self.terms.get(int(e), self.field.zero)

    # -- ramification management

    def lift(self, new_ram: int) -> "PuiseuxSeries":
        if new_ram == self.ram:
            return self
        if new_ram % self.ram:
            raise ValueError("ramification lift must be to a multiple")
        s = new_ram // self.ram
        t = self.trunc if self.trunc is INF else self.trunc * s
        out = object.__new__(PuiseuxSeries)
        out.field = self.field
        out.ram = new_ram
        out.terms = {k * s: c for k, c in self.terms.items()}
        out.trunc = t
        return out

    @staticmethod
    def common(a: "PuiseuxSeries", b: "PuiseuxSeries"):
        m = a.ram * b.ram // math.gcd(a.ram, b.ram)
        return a.lift(m), b.lift(m)

    def _low_key(self) -> Trunc:
        return min(self.terms) if self.terms else self.trunc

    # -- arithmetic

    def __add__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        a, b = PuiseuxSeries.common(self, other)
        t = min(a.trunc, b.trunc)
        terms = dict(a.terms)
        for k, c in b.terms.items():
            cur = terms.get(k)
            s = c if cur is None else cur + c
            if s.is_zero():
                terms.pop(k, None)
            else:
                terms[k] = s
        return PuiseuxSeries(a.field, a.ram, terms, t)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        out = object.__new__(PuiseuxSeries)
        out.field = self.field
        out.ram = self.ram
        out.terms = {k: -c for k, c in self.terms.items()}
        out.trunc = self.trunc
        return out

    def __mul__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        a, b = PuiseuxSeries.common(self, other)
        la, lb = a._low_key(), b._low_key()
        t = min(a.trunc + lb, b.trunc + la) if not (a.trunc is INF and b.trunc is INF) else INF
        if not a.terms or not b.terms:
            return PuiseuxSeries(a.field, a.ram, {}, t)
        terms: dict = {}
        for ka, ca in a.terms.items():
            for kb, cb in b.terms.items():
                k = ka + kb
                if t is not INF and k >= t:
                    continue
                c = ca * cb
                cur = terms.get(k)
                s = c if cur is None else cur + c
                if s.is_zero():
                    terms.pop(k, None)
                else:
                    terms[k] = s
        return PuiseuxSeries(a.field, a.ram, terms, t)

    def scale(self, c: FieldElem) -> "PuiseuxSeries":
        if c.is_zero():
            return PuiseuxSeries.zero(self.field)
        return PuiseuxSeries(self.field, self.ram, {k: v * c for k, v in self.terms.items()}, self.trunc)

    def shift(self, exp: Fraction) -> "PuiseuxSeries":
        """Multiply by t^exp."""
        e = Fraction(exp)
        m = self.ram * e.denominator // math.gcd(self.ram, e.denominator)
        a = self.lift(m)
        d = int(e * m)
        t = a.trunc if a.trunc is INF else a.trunc + d
        return PuiseuxSeries(a.field, m, {k + d: c for k, c in a.terms.items()}, t)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers: use invert explicitly")
        out = PuiseuxSeries(self.field, 1, {0: self.field.one}, INF)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def truncated(self, bound: Union[Fraction, float]) -> "PuiseuxSeries":
        """Forget all information at exponents >= bound (t-units)."""
        if bound is INF:
            return self
        b = Fraction(bound)
        m = self.ram * b.denominator // math.gcd(self.ram, b.denominator)
        a = self.lift(m)
        cut = int(b * m)
        t = cut if a.trunc is INF else min(a.trunc, cut)
        return PuiseuxSeries(a.field, m, a.terms, t)

    def invert(self, target: Union[Fraction, float] = INF) -> "PuiseuxSeries":
        """Multiplicative inverse, known to exponents < target (t-units).

        The leading order must be exact.  A single-term series inverts
        exactly; otherwise a finite target is required.
        """
        if not self.terms:
            raise NotAUnit("cannot invert a series with no visible term")
        k0 = min(self.terms)
        c0 = self.terms[k0]
        if len(self.terms) == 1 and self.trunc is INF:
            return PuiseuxSeries(self.field, self.ram, {-k0: c0.inverse()}, INF)
        if target is INF:
            raise NotAUnit("inverse of a multi-term series needs a finite target")
        # f = c0 t^(k0/m) (1 + w): invert the unit part by a geometric series
        unit = self.shift(Fraction(-k0, self.ram)).scale(c0.inverse())
        one = PuiseuxSeries(self.field, 1, {0: self.field.one}, INF)
        w = unit - one
        goal = Fraction(target) + Fraction(k0, self.ram)
        acc = one
        term = one
        while True:
            term = (-(term * w)).truncated(goal)
            acc = acc + term
            if not term.terms:
                break
        inv_unit = acc.scale(c0.inverse())
        return inv_unit.shift(Fraction(-k0, self.ram))

    def divide(self, other: "PuiseuxSeries", target: Union[Fraction, float] = INF) -> "PuiseuxSeries":
        """self/other known to exponents < target."""
        if not other.terms:
            raise NotAUnit("division by a series with no visible term")
        if self.is_identically_zero():
            return self
        if target is INF:
            return self * other.invert(INF)
        lo = self.order()
        inv = other.invert(Fraction(target) - lo.value)
        return (self * inv).truncated(target)

    # -- calculus / reparametrization

    def t_times_derivative(self) -> "PuiseuxSeries":
        """t * d/dt: multiplies each term by its exponent, kills constants."""
        terms = {}
        for k, c in self.terms.items():
            if k == 0:
                continue
            terms[k] = c * Fraction(k, self.ram)
        return PuiseuxSeries(self.field, self.ram, terms, self.trunc)

    def conjugate(self, j: int) -> "PuiseuxSeries":
        """Reparametrize t^(1/m) -> zeta_m^j t^(1/m)."""
        m = self.ram
        j %= m
        if j == 0 or m == 1:
            return self
        terms = {}
        for k, c in self.terms.items():
            z = Cyclotomic.root(m, (j * k) % m)
            terms[k] = c * self.field.from_cyclotomic(z)
        return PuiseuxSeries(self.field, m, terms, self.trunc)

    # -- comparison and display

    def same_terms(self, other: "PuiseuxSeries") -> bool:
        a, b = PuiseuxSeries.common(self, other)
        if set(a.terms) != set(b.terms):
            return False
        return all(a.terms[k] == b.terms[k] for k in a.terms)

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        a, b = PuiseuxSeries.common(self, other)
        return a.trunc == b.trunc and a.same_terms(b)

    __hash__ = None

    def render(self, var: str = "t") -> str:
        """Grammar-compatible text with a chosen name for the series variable."""
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            c = self.terms[k]
            cs = str(c)
            neg = cs.startswith("-") and not any(op in cs[1:] for op in (" + ", " - ", "/("))
            if neg:
                cs = cs[1:]
            if any(op in cs for op in (" + ", " - ")) or cs.startswith("("):
                cs = f"({cs})"
            e = Fraction(k, self.ram)
            if e == 0:
                body = cs
            elif e.denominator == 1:
                body = f"{cs}*{var}^{e.numerator}" if e != 1 else f"{cs}*{var}"
            else:
                body = f"{cs}*{var}^({e.numerator}/{e.denominator})"
            parts.append(("-" if neg else "+", body))
        sign, body = parts[0]
        out = body if sign == "+" else "-" + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.render("t")

    def __repr__(self):
        t = "inf" if self.trunc is INF else str(self.trunc)
        return f"PuiseuxSeries(ram={self.ram}, trunc={t}, {self})"
