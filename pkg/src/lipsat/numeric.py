"""Approximate complex embeddings of field elements.

Used for cross-checking exact arithmetic: an element is evaluated by sending
each parameter to a supplied complex number, zeta_N to exp(2*pi*i/N), and each
radical symbol to a principal k-th root of its (recursively evaluated)
radicand.  The embedding is a ring homomorphism onto its image for any choice
of parameter values, so exact identities must hold numerically.
"""

from __future__ import annotations

import cmath

from .algebra import Field, FieldElem
from .errors import DivisionByZero


def _eval_poly(field: Field, p: dict, env: dict[str, complex]) -> complex:
    total = complex(0)
    for mono, coeff in p.items():
        v = coeff.to_complex()
        for name, e in mono:
            v *= _symbol_value(field, name, env) ** e
        total += v
    return total


def _symbol_value(field: Field, name: str, env: dict[str, complex]) -> complex:
    if name in env:
        return env[name]
    sym = field.symbol(name)
    if sym.kind == "param":
        raise KeyError(f"no value supplied for parameter {name!r}")
    base = evaluate(sym.radicand, env)
    env[name] = base ** (1.0 / sym.degree) if base != 0 else complex(0)
    # cmath handles the principal branch for nonzero complex bases
    if base != 0:
        env[name] = cmath.exp(cmath.log(base) / sym.degree)
    return env[name]


def evaluate(elem: FieldElem, values: dict[str, complex] | None = None) -> complex:
    """Embed elem into C with the given parameter values."""
    env = dict(values or {})
    num = _eval_poly(elem.field, elem.num, env)
    den = _eval_poly(elem.field, elem.den, env)
    if den == 0:
        raise DivisionByZero("denominator vanishes at the chosen embedding")
    return num / den
