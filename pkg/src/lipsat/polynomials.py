"""Sparse polynomials in named variables with field-element coefficients.

This is the layer curve germs live in: variables are the plane coordinates
(typically x and y), while parameters and radicals stay inside the
coefficients.  Composition with Puiseux series, partial derivatives in both
variables and parameters, initial forms, and gcd-based squarefree reduction
are provided.  Gcds are computed by flattening variables and coefficient
symbols into one polynomial ring over Q(zeta_N); coefficients must be
denominator-free and radical-free for that (inputs of the geometric pipeline
always are).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

from . import algebra
from .algebra import Field, FieldElem
from .errors import UnsupportedExtension
from .series import INF, PuiseuxSeries

Exps = tuple


class Polynomial:
    __slots__ = ("field", "vars", "terms")

    def __init__(self, field: Field, vars: tuple[str, ...], terms: Mapping[Exps, FieldElem]):
        self.field = field
        self.vars = vars
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}

    # -- constructors

    @staticmethod
    def zero(field: Field, vars: tuple[str, ...]) -> "Polynomial":
        return Polynomial(field, vars, {})

    @staticmethod
    def constant(field: Field, vars: tuple[str, ...], c: FieldElem) -> "Polynomial":
        return Polynomial(field, vars, {(0,) * len(vars): c})

    @staticmethod
    def variable(field: Field, vars: tuple[str, ...], name: str) -> "Polynomial":
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return Polynomial(field, vars, {tuple(e): field.one})

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.field is not self.field or other.vars != self.vars:
                raise ValueError("mixing polynomials from different rings")
            return other
        if isinstance(other, FieldElem):
            return Polynomial.constant(self.field, self.vars, other)
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.field, self.vars, self.field.rational(other))
        return NotImplemented  # type: ignore[return-value]

    # -- ring operations

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        terms = dict(self.terms)
        for e, c in o.terms.items():
            cur = terms.get(e)
            s = c if cur is None else cur + c
            if s.is_zero():
                terms.pop(e, None)
            else:
                terms[e] = s
        return Polynomial(self.field, self.vars, terms)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return Polynomial(self.field, self.vars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        terms: dict = {}
        for ea, ca in self.terms.items():
            for eb, cb in o.terms.items():
                e = tuple(i + j for i, j in zip(ea, eb))
                c = ca * cb
                cur = terms.get(e)
                s = c if cur is None else cur + c
                if s.is_zero():
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return Polynomial(self.field, self.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        out = Polynomial.constant(self.field, self.vars, self.field.one)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def scale(self, c: FieldElem) -> "Polynomial":
        return Polynomial(self.field, self.vars, {e: v * c for e, v in self.terms.items()})

    # -- predicates and structure

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> FieldElem:
        return self.terms.get((0,) * len(self.vars), self.field.zero)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def min_degree(self) -> int:
        if not self.terms:
            return -1
        return min(sum(e) for e in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def initial_form(self) -> "Polynomial":
        """The homogeneous part of lowest total degree."""
        if not self.terms:
            return self
        d = self.min_degree()
        return Polynomial(self.field, self.vars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def strip_var(self, name: str) -> tuple[int, "Polynomial"]:
        """Largest k with name^k dividing self, and the exact quotient."""
        if not self.terms:
            return 0, self
        i = self.vars.index(name)
        k = min(e[i] for e in self.terms)
        if k == 0:
            return 0, self
        terms = {}
        for e, c in self.terms.items():
            f = list(e)
            f[i] -= k
            terms[tuple(f)] = c
        return k, Polynomial(self.field, self.vars, terms)

    def support(self) -> list[Exps]:
        return sorted(self.terms, key=lambda e: (sum(e), e))

    # -- derivatives

    def partial(self, name: str) -> "Polynomial":
        i = self.vars.index(name)
        terms: dict = {}
        for e, c in self.terms.items():
            if not e[i]:
                continue
            f = list(e)
            f[i] -= 1
            terms[tuple(f)] = c * self.field.rational(e[i])
        return Polynomial(self.field, self.vars, terms)

    def diff_param(self, name: str) -> "Polynomial":
        """Coefficient-wise derivative with respect to a field parameter."""
        terms: dict = {}
        for e, c in self.terms.items():
            d = c.diff(name)
            if not d.is_zero():
                terms[e] = d
        return Polynomial(self.field, self.vars, terms)

    # -- evaluation and substitution

    def evaluate(self, values: Mapping[str, FieldElem]) -> FieldElem:
        out = self.field.zero
        for e, c in self.terms.items():
            v = c
            for name, exp in zip(self.vars, e):
                if exp:
                    v = v * (values[name] ** exp)
            out = out + v
        return out

    def substitute(self, mapping: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Substitute polynomials for variables (all in the same ring)."""
        full = dict(mapping)
        for name in self.vars:
            if name not in full:
                full[name] = Polynomial.variable(self.field, self.vars, name)
        caches: dict[str, list[Polynomial]] = {}
        one = Polynomial.constant(self.field, self.vars, self.field.one)

        def power(name: str, e: int) -> Polynomial:
            base = full[name]
            cache = caches.setdefault(name, [one, base])
            while len(cache) <= e:
                cache.append(cache[-1] * base)
            return cache[e]

        out = Polynomial.zero(self.field, self.vars)
        for e, c in self.terms.items():
            term = one
            for name, exp in zip(self.vars, e):
                if exp:
                    term = term * power(name, exp)
            out = out + term.scale(c)
        return out

    def subs_series(self, assignment: Mapping[str, PuiseuxSeries]) -> PuiseuxSeries:
        """Compose with Puiseux series; truncations propagate automatically."""
        field = self.field
        one = PuiseuxSeries(field, 1, {0: field.one}, INF)
        caches: dict[str, list[PuiseuxSeries]] = {}

        def power(name: str, e: int) -> PuiseuxSeries:
            cache = caches.setdefault(name, [one, assignment[name]])
            while len(cache) <= e:
                cache.append(cache[-1] * assignment[name])
            return cache[e]

        out = PuiseuxSeries.zero(field)
        for e, c in self.terms.items():
            term = one
            for name, exp in zip(self.vars, e):
                if exp:
                    term = term * power(name, exp)
            out = out + term.scale(c)
        return out

    # -- gcd machinery (flattening into the coefficient engine)

    def _flatten(self) -> dict:
        big: dict = {}
        for e, c in self.terms.items():
            if not algebra._p_is_const(c.den):
                raise UnsupportedExtension("gcd needs denominator-free coefficients")
            for name in c.symbols():
                if self.field.symbol(name).kind == "radical":
                    raise UnsupportedExtension("gcd across radical symbols is unsupported")
            base = [(v, k) for v, k in zip(self.vars, e) if k]
            den_c = c.den[algebra._CONST_MONO]
            inv = den_c.inverse()
            for mono, coeff in c.num.items():
                full = tuple(sorted(list(mono) + base))
                cur = big.get(full)
                val = coeff * inv
                s = val if cur is None else cur + val
                if s.is_zero():
                    big.pop(full, None)
                else:
                    big[full] = s
        return big

    def _unflatten(self, big: dict) -> "Polynomial":
        terms: dict = {}
        for mono, coeff in big.items():
            e = [0] * len(self.vars)
            rest = []
            for name, k in mono:
                if name in self.vars:
                    e[self.vars.index(name)] = k
                else:
                    rest.append((name, k))
            elem = FieldElem._from_polys(
                self.field,
                {tuple(rest): coeff},
                {algebra._CONST_MONO: algebra.Cyclotomic.from_rational(1)},
                trusted=True,
            )
            key = tuple(e)
            cur = terms.get(key)
            terms[key] = elem if cur is None else cur + elem
        return Polynomial(self.field, self.vars, terms)

    def gcd(self, other: "Polynomial") -> "Polynomial":
        o = self._coerce(other)
        g = algebra.poly_gcd(self._flatten(), o._flatten())
        out = self._unflatten(g)
        # normalize: lowest term (local order) gets coefficient 1
        lead = out.terms[min(out.terms, key=lambda e: (sum(e), e))]
        return out.scale(lead.inverse())

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        o = self._coerce(other)
        q = algebra._p_exact_div(self._flatten(), o._flatten())
        return self._unflatten(q)

    def squarefree_part(self) -> "Polynomial":
        """self / gcd(self, all partials) -- the reduced equation."""
        if self.is_zero() or self.is_constant():
            return self
        g = self
        for v in self.vars:
            p = self.partial(v)
            if not p.is_zero():
                g = g.gcd(p)
        if g.is_constant():
            return self
        return self.exact_div(g)

    def is_squarefree(self) -> bool:
        g = self
        for v in self.vars:
            p = self.partial(v)
            if not p.is_zero():
                g = g.gcd(p)
        return g.is_constant()

    # -- display

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in self.support():
            c = self.terms[e]
            factors = []
            for name, exp in zip(self.vars, e):
                if exp == 1:
                    factors.append(name)
                elif exp > 1:
                    factors.append(f"{name}^{exp}")
            cs = str(c)
            neg = cs.startswith("-") and " " not in cs and "/(" not in cs
            if neg:
                cs = cs[1:]
            simple = not (" " in cs or cs.startswith("("))
            if not factors:
                body = cs if simple else f"({cs})"
            elif cs == "1":
                body = "*".join(factors)
            else:
                body = (cs if simple else f"({cs})") + "*" + "*".join(factors)
            parts.append(("-" if neg else "+", body))
        sign, body = parts[0]
        out = body if sign == "+" else "-" + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({self})"


def ring(field: Field, names: Iterable[str]):
    """Convenience: the variable polynomials for the given names."""
    vars = tuple(names)
    return tuple(Polynomial.variable(field, vars, n) for n in vars)
