"""Exact coefficient arithmetic: Q(zeta_N) with named parameters and radicals.

The coefficient tower is built in three layers:

* ``Cyclotomic`` -- elements of Q(zeta_N) in the power basis of zeta_N modulo
  the N-th cyclotomic polynomial.  N grows on demand (lcm) when values of
  different orders meet.
* sparse polynomials in registered symbols (transcendental parameters and
  radical symbols) with ``Cyclotomic`` coefficients, represented as plain
  dicts; module-private helpers operate on them.
* ``FieldElem`` -- quotients num/den of such polynomials, kept in a canonical
  reduced form: radical exponents below their degrees, denominator free of
  radical symbols, gcd cancelled, denominator's leading coefficient scaled
  to 1 under the local monomial order (total degree ascending, then lex).

Radical symbols carry a single rewrite rule name^k -> radicand.  Radicands may
mention previously registered radicals only, so the rewrite system is a
triangular tower and reduction terminates.  Quotients that fail to be fields
surface lazily: a vanishing conjugate-product denominator raises
``UnsupportedExtension`` at division time.
"""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from typing import Iterable, Optional, Union

from .errors import DivisionByZero, UnknownSymbol, UnsupportedExtension

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _euler_phi(n: int) -> int:
    result = n
    m, p = n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _poly_div_exact(num: list[Fraction], den: list[Fraction]) -> list[Fraction]:
    """Exact division of univariate rational polynomials (lists, ascending)."""
    num = list(num)
    out = [_ZERO] * (len(num) - len(den) + 1)
    for top in range(len(num) - 1, len(den) - 2, -1):
        c = num[top] / den[-1]
        k = top - (len(den) - 1)
        out[k] = c
        if c:
            for j, d in enumerate(den):
                num[k + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


_CYCLO_CACHE: dict[int, tuple[Fraction, ...]] = {}


def cyclotomic_polynomial(n: int) -> tuple[Fraction, ...]:
    """Coefficients of the n-th cyclotomic polynomial, ascending, monic."""
    got = _CYCLO_CACHE.get(n)
    if got is not None:
        return got
    poly = [-_ONE] + [_ZERO] * (n - 1) + [_ONE]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, list(cyclotomic_polynomial(d)))
    result = tuple(poly)
    _CYCLO_CACHE[n] = result
    return result


def _cyclo_reduce(vec: list[Fraction], n: int) -> tuple[Fraction, ...]:
    phi = _euler_phi(n)
    mod = cyclotomic_polynomial(n)
    for i in range(len(vec) - 1, phi - 1, -1):
        c = vec[i]
        if c:
            vec[i] = _ZERO
            base = i - phi
            for j in range(phi):
                if mod[j]:
                    vec[base + j] -= c * mod[j]
    vec = vec[:phi]
    while len(vec) < phi:
        vec.append(_ZERO)
    return tuple(vec)


def _poly_ext_inv(a: list[Fraction], mod: list[Fraction]) -> list[Fraction]:
    """Inverse of a modulo an irreducible rational polynomial (ext. Euclid)."""
    r0, r1 = list(mod), list(a)
    s0, s1 = [_ZERO], [_ONE]

    def _strip(p):
        while p and not p[-1]:
            p.pop()
        return p

    def _sub_scaled(p, q, c, shift):
        while len(p) < len(q) + shift:
            p.append(_ZERO)
        for i, qc in enumerate(q):
            p[i + shift] -= c * qc
        return _strip(p)

    r0, r1 = _strip(r0), _strip(r1)
    while r1:
        q_acc: list[tuple[Fraction, int]] = []
        while len(r0) >= len(r1) and r0:
            c = r0[-1] / r1[-1]
            shift = len(r0) - len(r1)
            q_acc.append((c, shift))
            r0 = _sub_scaled(r0, r1, c, shift)
        for c, shift in q_acc:
            s0 = _sub_scaled(s0, s1, c, shift)
        r0, r1 = r1, r0
        s0, s1 = s1, s0
    if len(r0) != 1:
        raise ArithmeticError("modulus not irreducible or element is zero")
    lead = r0[0]
    return [c / lead for c in s0]


class Cyclotomic:
    """An element of Q(zeta_N) in the power basis of zeta_N."""

    __slots__ = ("order", "coords")

    def __init__(self, order: int, coords: tuple[Fraction, ...]):
        self.order = order
        self.coords = coords

    @staticmethod
    def from_rational(q) -> "Cyclotomic":
        return Cyclotomic(1, (Fraction(q),))

    @staticmethod
    def root(n: int, k: int = 1) -> "Cyclotomic":
        """zeta_n^k."""
        k %= n
        vec = [_ZERO] * (k + 1)
        vec[k] = _ONE
        return Cyclotomic(n, _cyclo_reduce(vec, n))

    def lift(self, m: int) -> "Cyclotomic":
        if m == self.order:
            return self
        if m % self.order:
            raise ValueError("can only lift to a multiple of the current order")
        step = m // self.order
        vec = [_ZERO] * ((len(self.coords) - 1) * step + 1)
        for k, c in enumerate(self.coords):
            if c:
                vec[k * step] += c
        return Cyclotomic(m, _cyclo_reduce(vec, m))

    def _pair(self, other: "Cyclotomic"):
        if self.order == other.order:
            return self, other
        m = self.order * other.order // math.gcd(self.order, other.order)
        return self.lift(m), other.lift(m)

    def __add__(self, other):
        if self.order == other.order:
            return Cyclotomic(
                self.order, tuple(x + y for x, y in zip(self.coords, other.coords))
            )
        # a rational value sits in coords[0] of any power basis
        if not any(other.coords[1:]):
            return Cyclotomic(
                self.order, (self.coords[0] + other.coords[0],) + self.coords[1:]
            )
        if not any(self.coords[1:]):
            return Cyclotomic(
                other.order, (other.coords[0] + self.coords[0],) + other.coords[1:]
            )
        a, b = self._pair(other)
        return Cyclotomic(a.order, tuple(x + y for x, y in zip(a.coords, b.coords)))

    def __sub__(self, other):
        if self.order == other.order:
            return Cyclotomic(
                self.order, tuple(x - y for x, y in zip(self.coords, other.coords))
            )
        if not any(other.coords[1:]):
            return Cyclotomic(
                self.order, (self.coords[0] - other.coords[0],) + self.coords[1:]
            )
        if not any(self.coords[1:]):
            return Cyclotomic(
                other.order,
                (self.coords[0] - other.coords[0],) + tuple(-x for x in other.coords[1:]),
            )
        a, b = self._pair(other)
        return Cyclotomic(a.order, tuple(x - y for x, y in zip(a.coords, b.coords)))

    def __neg__(self):
        return Cyclotomic(self.order, tuple(-x for x in self.coords))

    def __mul__(self, other):
        if type(other) is Fraction:
            return Cyclotomic(self.order, tuple(x * other for x in self.coords))
        # rational factors avoid lifting, convolution, and reduction entirely
        oc = other.coords
        if len(oc) == 1 or not any(oc[1:]):
            q = oc[0]
            return Cyclotomic(self.order, tuple(x * q for x in self.coords))
        sc = self.coords
        if len(sc) == 1 or not any(sc[1:]):
            q = sc[0]
            return Cyclotomic(other.order, tuple(x * q for x in oc))
        a, b = self._pair(other)
        n = len(a.coords)
        vec = [_ZERO] * (2 * n - 1)
        for i, x in enumerate(a.coords):
            if x:
                for j, y in enumerate(b.coords):
                    if y:
                        vec[i + j] += x * y
        return Cyclotomic(a.order, _cyclo_reduce(vec, a.order))

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise DivisionByZero("inverse of zero in Q(zeta_N)")
        if self.is_rational():
            return Cyclotomic(self.order, (1 / self.coords[0],) + self.coords[1:])
        inv = _poly_ext_inv(list(self.coords), list(cyclotomic_polynomial(self.order)))
        return Cyclotomic(self.order, _cyclo_reduce(inv, self.order))

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = Cyclotomic.from_rational(1)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational value")
        return self.coords[0]

    def __eq__(self, other):
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        a, b = self._pair(other)
        return a.coords == b.coords

    __hash__ = None  # mutable-free but identity hashing would be a trap

    def to_complex(self) -> complex:
        z = complex(0)
        for k, c in enumerate(self.coords):
            if c:
                ang = 2.0 * math.pi * k / self.order
                z += float(c) * complex(math.cos(ang), math.sin(ang))
        return z

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coords):
            if not c:
                continue
            if k == 0:
                parts.append(str(c))
            else:
                power = f"zeta_{self.order}" if k == 1 else f"zeta_{self.order}^{k}"
                parts.append(power if c == 1 else f"{c}*{power}")
        out = parts[0]
        for p in parts[1:]:
            if p.startswith("-"):
                out += " - " + p[1:]
            else:
                out += " + " + p
        return out

    def __repr__(self):
        return f"Cyclotomic({self.order}, {self})"


def lift_cyclotomic_order(values: Iterable[Cyclotomic], order: int) -> list[Cyclotomic]:
    """Re-express values in Q(zeta_order); order must be a common multiple."""
    return [v.lift(order) for v in values]


# ---------------------------------------------------------------------------
# sparse polynomials in registered symbols, Cyclotomic coefficients
# ---------------------------------------------------------------------------
#
# Mono: tuple of (symbol name, positive exponent), sorted by name.
# Poly: dict mapping Mono -> nonzero Cyclotomic.

Mono = tuple

_CONST_MONO: Mono = ()


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for name, e in b:
        merged[name] = merged.get(name, 0) + e
    return tuple(sorted(merged.items()))


def _mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


def _mono_sub(a: Mono, b: Mono) -> Mono:
    """a / b; b must divide a."""
    if not b:
        return a
    d = dict(a)
    for name, e in b:
        r = d[name] - e
        if r:
            d[name] = r
        else:
            del d[name]
    return tuple(sorted(d.items()))


def _mono_meet(a: Mono, b: Mono) -> Mono:
    """Per-variable minimum (the monomial gcd)."""
    if not a or not b:
        return _CONST_MONO
    db = dict(b)
    out = []
    for name, e in a:
        eb = db.get(name, 0)
        m = e if e < eb else eb
        if m:
            out.append((name, m))
    return tuple(out)


def _mono_content(p: dict) -> Mono:
    """Largest monomial dividing every term of p."""
    it = iter(p)
    try:
        acc = next(it)
    except StopIteration:
        return _CONST_MONO
    for m in it:
        if not acc:
            return _CONST_MONO
        acc = _mono_meet(acc, m)
    return acc


def _mono_key(m: Mono):
    # local order: total degree ascending, then the sorted factor tuple
    return (_mono_degree(m), m)


def _pzero() -> dict:
    return {}


def _pconst(c: Cyclotomic) -> dict:
    return {} if c.is_zero() else {_CONST_MONO: c}


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for m, c in b.items():
        cur = out.get(m)
        s = c if cur is None else cur + c
        if s.is_zero():
            out.pop(m, None)
        else:
            out[m] = s
    return out


def _pneg(a: dict) -> dict:
    return {m: -c for m, c in a.items()}


def _pmul(a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    out: dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _mono_mul(ma, mb)
            c = ca * cb
            cur = out.get(m)
            s = c if cur is None else cur + c
            if s.is_zero():
                out.pop(m, None)
            else:
                out[m] = s
    return out


def _pscale(a: dict, c: Cyclotomic) -> dict:
    if c.is_zero():
        return {}
    return {m: x * c for m, x in a.items()}


def _pvars(a: dict) -> set:
    names = set()
    for m in a:
        for name, _ in m:
            names.add(name)
    return names


def _p_is_const(a: dict) -> bool:
    return len(a) == 0 or (len(a) == 1 and _CONST_MONO in a)


def _p_leading(a: dict) -> tuple[Mono, Cyclotomic]:
    m = min(a, key=_mono_key)
    return m, a[m]


def _pdiff(a: dict, name: str) -> dict:
    out: dict = {}
    for m, c in a.items():
        d = dict(m)
        e = d.get(name, 0)
        if not e:
            continue
        if e == 1:
            del d[name]
        else:
            d[name] = e - 1
        mono = tuple(sorted(d.items()))
        coeff = c * Fraction(e)
        cur = out.get(mono)
        s = coeff if cur is None else cur + coeff
        if s.is_zero():
            out.pop(mono, None)
        else:
            out[mono] = s
    return out


def _poly_str(a: dict) -> str:
    if not a:
        return "0"
    parts = []
    for m in sorted(a, key=_mono_key):
        c = a[m]
        factors = []
        for name, e in m:
            factors.append(name if e == 1 else f"{name}^{e}")
        if c.is_rational():
            q = c.rational_value()
            neg = q < 0
            q = abs(q)
            if not factors:
                body = str(q)
            elif q == 1:
                body = "*".join(factors)
            else:
                body = str(q) + "*" + "*".join(factors)
        else:
            neg = False
            cs = str(c)
            body = f"({cs})" if (" " in cs) else cs
            if factors:
                body += "*" + "*".join(factors)
        parts.append(("-" if neg else "+", body))
    sign, body = parts[0]
    out = body if sign == "+" else "-" + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# --- multivariate gcd over Q(zeta_N): primitive PRS --------------------------
#
# Most gcd queries come from fraction normalization where numerator and
# denominator are coprime; a full pseudo-remainder sequence is the worst way
# to learn that.  Before running it, a modular certificate is attempted: all
# variables but one are specialized at fixed points over F_p (p = 1 mod N so
# Q(zeta_N) maps in), and a constant univariate gcd without degree drop
# proves the true gcd has degree zero in the kept variable.  Every shared
# variable certified constant => the gcd is constant.  Any degeneracy falls
# back to the exact sequence.


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


_MOD_SETUP_CACHE: dict[tuple[int, int], tuple[int, int]] = {}


def _mod_setup(order: int, attempt: int) -> tuple[int, int]:
    """A prime p = 1 (mod order) near 2^30 and an element of F_p of
    multiplicative order exactly `order`."""
    got = _MOD_SETUP_CACHE.get((order, attempt))
    if got is not None:
        return got
    k = (1 << 30) // order + 1 + attempt * 257
    while not _is_probable_prime(k * order + 1):
        k += 1
    p = k * order + 1
    omega = 1
    if order > 1:
        qs = _prime_factors(order)
        g = 2
        while True:
            omega = pow(g, (p - 1) // order, p)
            if omega != 1 and all(pow(omega, order // q, p) != 1 for q in qs):
                break
            g += 1
    _MOD_SETUP_CACHE[(order, attempt)] = (p, omega)
    return p, omega


def _cyclo_mod(c: Cyclotomic, order: int, p: int, omega: int) -> Optional[int]:
    """Image of c in F_p under zeta_order -> omega; None if p divides a
    coefficient denominator."""
    step = order // c.order
    acc = 0
    for k, q in enumerate(c.coords):
        if not q:
            continue
        den = q.denominator % p
        if den == 0:
            return None
        acc += q.numerator % p * pow(den, p - 2, p) % p * pow(omega, k * step, p)
    return acc % p


def _specialize_mod(
    a: dict, v: str, points: dict[str, int], order: int, p: int, omega: int
) -> Optional[list[int]]:
    """a as a univariate in v over F_p, all other variables at the given
    points; None on a denominator collision."""
    coeffs: dict[int, int] = {}
    for m, c in a.items():
        w = _cyclo_mod(c, order, p, omega)
        if w is None:
            return None
        e_v = 0
        for name, e in m:
            if name == v:
                e_v = e
            else:
                w = w * pow(points[name], e, p) % p
        coeffs[e_v] = (coeffs.get(e_v, 0) + w) % p
    deg = max((e for e, w in coeffs.items() if w), default=-1)
    return [coeffs.get(i, 0) for i in range(deg + 1)]


def _mod_gcd_is_const(fa: list[int], fb: list[int], p: int) -> bool:
    a, b = list(fa), list(fb)
    while b and not b[-1]:
        b.pop()
    while a and not a[-1]:
        a.pop()
    while b:
        if len(b) == 1:
            return True
        inv = pow(b[-1], p - 2, p)
        while len(a) >= len(b):
            c = a[-1] * inv % p
            shift = len(a) - len(b)
            for i, bc in enumerate(b):
                a[i + shift] = (a[i + shift] - c * bc) % p
            while a and not a[-1]:
                a.pop()
        a, b = b, a
    return len(a) <= 1


def _gcd_certainly_const(a: dict, b: dict) -> bool:
    """True only with a proof that gcd(a, b) is a constant."""
    shared = _pvars(a) & _pvars(b)
    if not shared:
        return True
    order = 1
    for poly in (a, b):
        for c in poly.values():
            order = order * c.order // math.gcd(order, c.order)
    names = sorted(_pvars(a) | _pvars(b))
    for attempt in range(2):
        p, omega = _mod_setup(order, attempt)
        points = {
            name: (3 + 2 * i + 29 * attempt) % p for i, name in enumerate(names)
        }
        certified = True
        for v in sorted(shared):
            fa = _specialize_mod(a, v, points, order, p, omega)
            fb = _specialize_mod(b, v, points, order, p, omega)
            if (
                fa is None
                or fb is None
                or len(fa) - 1 != _p_degree_in(a, v)
                or len(fb) - 1 != _p_degree_in(b, v)
                or not _mod_gcd_is_const(fa, fb, p)
            ):
                certified = False
                break
        if certified:
            return True
    return False


def _p_degree_in(a: dict, v: str) -> int:
    deg = 0
    for m in a:
        for name, e in m:
            if name == v and e > deg:
                deg = e
    return deg


def _p_coeffs_in(a: dict, v: str) -> dict[int, dict]:
    """View a as univariate in v: degree -> coefficient poly (v removed)."""
    out: dict[int, dict] = {}
    for m, c in a.items():
        e = 0
        rest = []
        for name, exp in m:
            if name == v:
                e = exp
            else:
                rest.append((name, exp))
        out.setdefault(e, {})[tuple(rest)] = c
    return out


def _p_from_coeffs(coeffs: dict[int, dict], v: str) -> dict:
    out: dict = {}
    for e, p in coeffs.items():
        for m, c in p.items():
            if e:
                mono = tuple(sorted(list(m) + [(v, e)]))
            else:
                mono = m
            out[mono] = c
    return out


def _p_exact_div(a: dict, b: dict) -> dict:
    """Exact division a / b; raises ArithmeticError if not exact."""
    if not b:
        raise DivisionByZero("polynomial division by zero")
    if not a:
        return {}
    if _p_is_const(b):
        return _pscale(a, b[_CONST_MONO].inverse())
    v = max(_pvars(b))
    ca = _p_coeffs_in(a, v)
    cb = _p_coeffs_in(b, v)
    db = max(cb)
    lead_b = cb[db]
    quot: dict[int, dict] = {}
    guard = 0
    while ca:
        da = max(ca)
        if da < db:
            raise ArithmeticError("inexact polynomial division")
        qc = _p_exact_div(ca[da], lead_b)
        quot[da - db] = qc
        for e, p in cb.items():
            tgt = da - db + e
            cur = ca.get(tgt, {})
            cur = _padd(cur, _pneg(_pmul(qc, p)))
            if cur:
                ca[tgt] = cur
            else:
                ca.pop(tgt, None)
        guard += 1
        if guard > 10000:
            raise ArithmeticError("division did not terminate")
    return _p_from_coeffs(quot, v)


def _p_unit_normalize(a: dict) -> dict:
    if not a:
        return a
    _, c = _p_leading(a)
    return _pscale(a, c.inverse())


def _p_content_and_primitive(a: dict, v: str) -> tuple[dict, dict]:
    coeffs = _p_coeffs_in(a, v)
    content: Optional[dict] = None
    for e in sorted(coeffs):
        content = coeffs[e] if content is None else poly_gcd(content, coeffs[e])
        if _p_is_const(content):
            content = _pconst(Cyclotomic.from_rational(1))
            break
    prim = _p_exact_div(a, content)
    return content, prim


def _p_pseudo_rem(a: dict, b: dict, v: str) -> dict:
    ca = _p_coeffs_in(a, v)
    cb = _p_coeffs_in(b, v)
    db = max(cb)
    lead_b = cb[db]
    guard = 0
    while ca and max(ca) >= db:
        da = max(ca)
        lead_a = ca[da]
        # multiply remainder by lead_b, then cancel the top term
        ca = {e: _pmul(p, lead_b) for e, p in ca.items()}
        for e, p in cb.items():
            tgt = da - db + e
            cur = ca.get(tgt, {})
            cur = _padd(cur, _pneg(_pmul(lead_a, p)))
            if cur:
                ca[tgt] = cur
            else:
                ca.pop(tgt, None)
        guard += 1
        if guard > 10000:
            raise ArithmeticError("pseudo-division did not terminate")
    return _p_from_coeffs(ca, v)


def poly_gcd(a: dict, b: dict) -> dict:
    """gcd of two sparse polynomials over Q(zeta_N), unit-normalized."""
    if not a:
        return _p_unit_normalize(b) if b else {}
    if not b:
        return _p_unit_normalize(a)
    if _p_is_const(a) or _p_is_const(b):
        return _pconst(Cyclotomic.from_rational(1))
    # split off monomial content: variable factors and the rest never mix
    ca, cb = _mono_content(a), _mono_content(b)
    if ca or cb:
        a1 = {_mono_sub(m, ca): c for m, c in a.items()} if ca else a
        b1 = {_mono_sub(m, cb): c for m, c in b.items()} if cb else b
        cg = _mono_meet(ca, cb)
        inner = poly_gcd(a1, b1)
        if cg:
            return {_mono_mul(m, cg): c for m, c in inner.items()}
        return inner
    if _gcd_certainly_const(a, b):
        return _pconst(Cyclotomic.from_rational(1))
    vars_ab = _pvars(a) | _pvars(b)
    v = max(vars_ab)
    if v not in _pvars(a) or v not in _pvars(b):
        # one side is constant in v: gcd divides its content
        if v not in _pvars(a):
            content, _ = _p_content_and_primitive(b, v)
            return poly_gcd(a, content)
        content, _ = _p_content_and_primitive(a, v)
        return poly_gcd(content, b)
    cont_a, prim_a = _p_content_and_primitive(a, v)
    cont_b, prim_b = _p_content_and_primitive(b, v)
    cont_g = poly_gcd(cont_a, cont_b)
    f, g = prim_a, prim_b
    if _p_degree_in(f, v) < _p_degree_in(g, v):
        f, g = g, f
    while g:
        r = _p_pseudo_rem(f, g, v)
        if not r:
            break
        _, r = _p_content_and_primitive(r, v)
        f, g = g, r
        if _p_degree_in(g, v) == 0:
            g = {}
            f = _pconst(Cyclotomic.from_rational(1))
            break
    _, prim = _p_content_and_primitive(f if not g else g, v)
    return _p_unit_normalize(_pmul(cont_g, prim))


# ---------------------------------------------------------------------------
# the field and its elements
# ---------------------------------------------------------------------------


def _int_kth_root(n: int, k: int) -> Optional[int]:
    """Exact integer k-th root of n >= 0, or None."""
    if n < 0:
        return None
    if n in (0, 1):
        return n
    lo, hi = 0, 1
    while hi**k < n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


class _Symbol:
    __slots__ = ("name", "kind", "degree", "radicand", "index")

    def __init__(self, name, kind, degree=None, radicand=None, index=None):
        self.name = name
        self.kind = kind  # "param" | "radical"
        self.degree = degree
        self.radicand = radicand
        self.index = index


class Field:
    """Registry for parameters and radical symbols; element factory.

    The registry is append-only; elements hold a reference to their field and
    refuse to mix with elements of another.  Registration is guarded by a lock
    so values can be shared across concurrent evaluations.
    """

    def __init__(self):
        self._symbols: dict[str, _Symbol] = {}
        self._radicals: list[_Symbol] = []
        self._radical_keys: dict[tuple[str, int], str] = {}
        self._radical_degrees: dict[str, int] = {}
        self._lock = threading.Lock()

    # -- element factories

    def rational(self, q) -> "FieldElem":
        return FieldElem._from_polys(self, _pconst(Cyclotomic.from_rational(Fraction(q))), _pconst(Cyclotomic.from_rational(1)), trusted=True)

    @property
    def zero(self) -> "FieldElem":
        return self.rational(0)

    @property
    def one(self) -> "FieldElem":
        return self.rational(1)

    def from_cyclotomic(self, c: Cyclotomic) -> "FieldElem":
        return FieldElem._from_polys(self, _pconst(c), _pconst(Cyclotomic.from_rational(1)), trusted=True)

    def zeta(self, n: int, k: int = 1) -> "FieldElem":
        return self.from_cyclotomic(Cyclotomic.root(n, k))

    def parameter(self, name: str) -> "FieldElem":
        with self._lock:
            sym = self._symbols.get(name)
            if sym is None:
                sym = _Symbol(name, "param")
                self._symbols[name] = sym
            elif sym.kind != "param":
                raise UnknownSymbol(f"{name!r} is already a radical symbol")
        return self._symbol_elem(name)

    def _symbol_elem(self, name: str) -> "FieldElem":
        num = {((name, 1),): Cyclotomic.from_rational(1)}
        return FieldElem._from_polys(self, num, _pconst(Cyclotomic.from_rational(1)), trusted=True)

    def symbol(self, name: str) -> _Symbol:
        sym = self._symbols.get(name)
        if sym is None:
            raise UnknownSymbol(f"unregistered symbol {name!r}")
        return sym

    def parameters(self) -> list[str]:
        return sorted(n for n, s in self._symbols.items() if s.kind == "param")

    def radicals(self) -> list[_Symbol]:
        return list(self._radicals)

    # -- radicals

    def adjoin_radical(self, radicand: "FieldElem", k: int) -> "FieldElem":
        """A k-th root of radicand: simplified in place when possible,
        otherwise a fresh radical symbol with rewrite name^k -> radicand."""
        if k < 2:
            raise ValueError("radical degree must be >= 2")
        if radicand.field is not self:
            raise ValueError("radicand belongs to a different field")
        if radicand.is_zero():
            return self.zero
        simplified = self._try_perfect_power(radicand, k)
        if simplified is not None:
            return simplified
        ru = self._as_root_of_unity(radicand)
        if ru is not None:
            raise UnsupportedExtension(
                "radicand is a root of unity; use the cyclotomic layer (zeta_N) instead"
            )
        key = (radicand.key(), k)
        with self._lock:
            name = self._radical_keys.get(key)
            if name is None:
                index = len(self._radicals) + 1
                name = f"r{index}"
                sym = _Symbol(name, "radical", degree=k, radicand=radicand, index=index)
                self._symbols[name] = sym
                self._radicals.append(sym)
                self._radical_keys[key] = name
                self._radical_degrees[name] = k
        return self._symbol_elem(name)

    def _try_perfect_power(self, radicand: "FieldElem", k: int) -> Optional["FieldElem"]:
        if len(radicand.num) != 1 or len(radicand.den) != 1:
            return None
        (mn, cn), = radicand.num.items()
        (md, cd), = radicand.den.items()
        if any(e % k for _, e in mn) or any(e % k for _, e in md):
            return None
        if not (cn.is_rational() and cd.is_rational()):
            return None
        q = cn.rational_value() / cd.rational_value()
        neg = q < 0
        if neg and k % 2 == 0:
            root_abs = self._rational_kth_root(abs(q), k)
            if root_abs is None:
                return None
            # q < 0, k even: |q|^(1/k) * zeta_{2k}
            coeff = Cyclotomic.root(2 * k, 1) * root_abs
        else:
            root = self._rational_kth_root(abs(q), k)
            if root is None:
                return None
            if neg:
                root = -root
            coeff = Cyclotomic.from_rational(root)
        mono_n = tuple((name, e // k) for name, e in mn)
        mono_d = tuple((name, e // k) for name, e in md)
        num = {mono_n: coeff}
        den = {mono_d: Cyclotomic.from_rational(1)}
        return FieldElem(self, num, den)

    @staticmethod
    def _rational_kth_root(q: Fraction, k: int) -> Optional[Fraction]:
        rn = _int_kth_root(q.numerator, k)
        rd = _int_kth_root(q.denominator, k)
        if rn is None or rd is None:
            return None
        return Fraction(rn, rd)

    @staticmethod
    def _as_root_of_unity(radicand: "FieldElem") -> Optional[int]:
        if radicand.num and set(radicand.num) <= {_CONST_MONO} and set(radicand.den) <= {_CONST_MONO}:
            c = radicand.num[_CONST_MONO] / radicand.den[_CONST_MONO]
            n = c.order
            for j in range(n):
                if c == Cyclotomic.root(n, j):
                    return j
        return None


class FieldElem:
    """A canonical quotient of symbol polynomials over Q(zeta_N)."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: Field, num: dict, den: dict):
        self.field = field
        self.num, self.den = _normalize(field, num, den)

    @staticmethod
    def _from_polys(field, num, den, trusted=False):
        if not trusted:
            return FieldElem(field, num, den)
        obj = object.__new__(FieldElem)
        obj.field = field
        obj.num = num
        obj.den = den
        return obj

    # -- coercion

    def _coerce(self, other) -> "FieldElem":
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise ValueError("mixing elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented  # type: ignore[return-value]

    # -- ring/field operations

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        # canonical elements have monic denominators, so a constant one is 1:
        # sums of reduced polynomials stay reduced and need no renormalization
        if _p_is_const(self.den) and _p_is_const(o.den):
            return FieldElem._from_polys(
                self.field, _padd(self.num, o.num), self.den, trusted=True
            )
        num = _padd(_pmul(self.num, o.den), _pmul(o.num, self.den))
        return FieldElem(self.field, num, _pmul(self.den, o.den))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if _p_is_const(self.den) and _p_is_const(o.den):
            return FieldElem._from_polys(
                self.field, _padd(self.num, _pneg(o.num)), self.den, trusted=True
            )
        num = _padd(_pmul(self.num, o.den), _pneg(_pmul(o.num, self.den)))
        return FieldElem(self.field, num, _pmul(self.den, o.den))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        return FieldElem._from_polys(self.field, _pneg(self.num), self.den, trusted=True)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FieldElem(self.field, _pmul(self.num, o.num), _pmul(self.den, o.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o.is_zero():
            raise DivisionByZero("division by zero field element")
        return FieldElem(self.field, _pmul(self.num, o.den), _pmul(self.den, o.num))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise DivisionByZero("inverse of zero field element")
        return FieldElem(self.field, dict(self.den), dict(self.num))

    def __pow__(self, e: int):
        if not isinstance(e, int):
            raise TypeError("exponent must be an integer")
        if e < 0:
            return self.inverse() ** (-e)
        out = self.field.one
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    # -- predicates and views

    def is_zero(self) -> bool:
        return not self.num

    def is_one(self) -> bool:
        return self.num == self.den

    def is_rational(self) -> bool:
        return (
            _p_is_const(self.num)
            and _p_is_const(self.den)
            and (not self.num or self.num[_CONST_MONO].is_rational())
            and self.den[_CONST_MONO].is_rational()
        )

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        if not self.num:
            return Fraction(0)
        return self.num[_CONST_MONO].rational_value() / self.den[_CONST_MONO].rational_value()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        diff = _padd(_pmul(self.num, o.den), _pneg(_pmul(o.num, self.den)))
        if not diff:
            return True
        reduced, _ = _reduce_poly(self.field, diff)
        return not reduced

    __hash__ = None

    def symbols(self) -> set:
        return _pvars(self.num) | _pvars(self.den)

    def has_radical(self) -> bool:
        return any(self.field.symbol(n).kind == "radical" for n in self.symbols())

    # -- derivative with respect to a parameter

    def diff(self, name: str) -> "FieldElem":
        sym = self.field.symbol(name)
        if sym.kind != "param":
            raise UnsupportedExtension("derivative only with respect to parameters")
        if self.has_radical():
            raise UnsupportedExtension("derivative across radical symbols is unsupported")
        dn = _pdiff(self.num, name)
        dd = _pdiff(self.den, name)
        num = _padd(_pmul(dn, self.den), _pneg(_pmul(self.num, dd)))
        return FieldElem(self.field, num, _pmul(self.den, self.den))

    # -- presentation

    def num_str(self) -> str:
        return _poly_str(self.num)

    def den_str(self) -> str:
        return _poly_str(self.den)

    def key(self) -> str:
        """Canonical sort/dedup key."""
        return f"{_poly_str(self.num)}|{_poly_str(self.den)}"

    def __str__(self):
        if self.den == _pconst(Cyclotomic.from_rational(1)):
            return _poly_str(self.num)
        return f"({_poly_str(self.num)})/({_poly_str(self.den)})"

    def __repr__(self):
        return f"FieldElem({self})"


def normal_form(elem: FieldElem) -> FieldElem:
    """Rebuild the canonical representation (idempotent by construction)."""
    return FieldElem(elem.field, dict(elem.num), dict(elem.den))


# --- normalization pipeline ---------------------------------------------------


def _reduce_poly(field: Field, p: dict) -> tuple[dict, dict]:
    """Apply radical rewrites until all exponents are below their degrees.

    Returns (reduced numerator, denominator) with p == reduced/denominator in
    the quotient ring: rewriting name^k -> radicand can introduce the
    radicand's denominator.
    """
    # the common case returns the input unchanged (callers never mutate)
    one = _pconst(Cyclotomic.from_rational(1))
    rad_deg = field._radical_degrees
    if not rad_deg:
        return p, one
    deferred: list[tuple[Mono, Cyclotomic]] = []
    for m, c in p.items():
        for name, e in m:
            d = rad_deg.get(name)
            if d is not None and e >= d:
                deferred.append((m, c))
                break
    if not deferred:
        return p, one
    skip = {m for m, _ in deferred}
    plain = {m: c for m, c in p.items() if m not in skip}
    acc_num, acc_den = plain, one
    for m, c in deferred:
        rest = []
        factor_num, factor_den = _pconst(c), one
        for name, e in m:
            sym = field.symbol(name)
            if sym.kind == "radical" and e >= sym.degree:
                q, r = divmod(e, sym.degree)
                if r:
                    rest.append((name, r))
                power = sym.radicand ** q
                factor_num = _pmul(factor_num, power.num)
                factor_den = _pmul(factor_den, power.den)
            else:
                rest.append((name, e))
        mono = tuple(sorted(rest))
        factor_num = _pmul(factor_num, {mono: Cyclotomic.from_rational(1)})
        # accumulate acc + factor_num/factor_den
        acc_num = _padd(_pmul(acc_num, factor_den), _pmul(factor_num, acc_den))
        acc_den = _pmul(acc_den, factor_den)
    # the rewrite may have produced fresh over-degree exponents (stacked towers)
    rn, dn = _reduce_poly(field, acc_num)
    rd, dd = _reduce_poly(field, acc_den)
    return _pmul(rn, dd), _pmul(rd, dn)


def _apply_root_twist(p: dict, name: str, zeta: Cyclotomic) -> dict:
    """Substitute name -> zeta*name (exponents stay below the degree)."""
    out: dict = {}
    for m, c in p.items():
        e = 0
        for n, exp in m:
            if n == name:
                e = exp
                break
        out[m] = c * (zeta**e) if e else c
    return out


def _rationalize(field: Field, num: dict, den: dict) -> tuple[dict, dict]:
    guard = 0
    while True:
        rad_names = [
            n for n in _pvars(den) if field.symbol(n).kind == "radical"
        ]
        if not rad_names:
            return num, den
        name = max(rad_names, key=lambda n: field.symbol(n).index)
        k = field.symbol(name).degree
        zeta = Cyclotomic.root(k, 1)
        base = dict(den)
        for j in range(1, k):
            conj = _apply_root_twist(base, name, zeta**j)
            num = _pmul(num, conj)
            den = _pmul(den, conj)
        num, dn = _reduce_poly(field, num)
        den, dd = _reduce_poly(field, den)
        num = _pmul(num, dd)
        den = _pmul(den, dn)
        if _pvars(den) and name in _pvars(den):
            raise UnsupportedExtension(
                f"failed to clear radical {name} from a denominator"
            )
        if not den:
            raise UnsupportedExtension(
                "denominator has zero norm: the radical tower is not a field here"
            )
        guard += 1
        if guard > 100:
            raise UnsupportedExtension("radical tower too deep to rationalize")


def _normalize(field: Field, num: dict, den: dict) -> tuple[dict, dict]:
    one = _pconst(Cyclotomic.from_rational(1))
    if not den:
        raise DivisionByZero("zero denominator")
    num, dn = _reduce_poly(field, num)
    den_r, dd = _reduce_poly(field, den)
    num = num if dd == one else _pmul(num, dd)
    den = den_r if dn == one else _pmul(den_r, dn)
    if not den:
        raise UnsupportedExtension(
            "denominator reduces to zero: the radical tower is not a field here"
        )
    if not num:
        return {}, one
    num, den = _rationalize(field, num, den)
    if not _p_is_const(num) and not _p_is_const(den):
        g = poly_gcd(num, den)
        if not _p_is_const(g):
            num = _p_exact_div(num, g)
            den = _p_exact_div(den, g)
    _, lead = _p_leading(den)
    if not (lead.is_rational() and lead.rational_value() == 1):
        inv = lead.inverse()
        num = _pscale(num, inv)
        den = _pscale(den, inv)
    return num, den


Scalar = Union[FieldElem, int, Fraction]
