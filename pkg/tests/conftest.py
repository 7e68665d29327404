"""Shared corpus and helpers for the test suite."""

from __future__ import annotations

from fractions import Fraction

import pytest

from lipsat import Field, parse_poly
from lipsat.parsing import parse_series

# Germs exercised throughout the suite, named by their shape.
SEPTIC_CUSP = "(1/3)*x^3 - y^7 - x*y^5"
QUARTIC_CUSP = "x^3 + y^4"
QUINTIC_CUSP = "x^4 + y^5"
TWISTED_FAMILY = "x^3 - 3*t^2*x*y^4 + y^6"  # parameter t
TWISTED_AT_ONE = "x^3 - 3*x*y^4 + y^6"

# Germs whose expansions stay cheap at high precision: the curves named
# above where affordable, and otherwise their polars (which is what the
# membership engine actually expands).
RESIDUAL_CORPUS = [
    ("x^2 - y^3", ()),
    ("x^2 - y^5", ()),  # x-polar of the septic cusp
    ("x^3 - y^3", ()),
    ("x^3 + y^4", ()),
    ("x^4 + y^5", ()),
    ("3*x^2 - 4*c*y^3", ("c",)),  # generic-direction polar of x^3 + y^4
    ("3*x^2 - 3*y^4", ()),  # x-polar of the twisted family at t = 1
    ("-12*x*y^3 + 6*y^5", ()),  # y-polar of the twisted family at t = 1
    ("-7*y^6 - 5*x*y^4", ()),  # y-polar of the septic cusp
    ("3*x^2 - 3*t^2*y^4", ("t",)),  # x-polar of the twisted family
    ("(x - y^2)*(x - y^2 - y^9)", ()),
    ("x - y", ()),
    ("y*(x^2 - y^3)", ()),
]

ROUND_TRIP_CORPUS = [
    "x",
    "y^2",
    "x^3 + y^4",
    "x^4 + y^5",
    "(1/3)*x^3 - y^7 - x*y^5",
    "x^2 - y^5",
    "3*x^2 - 4*y^3",
    "(x - y^2)*(x - 2*y^2)*(x - y^3)",
    "2*x^3 - y^7 + x*y^5",
    "x^2 - y^2",
]


def fresh(text: str, params: tuple[str, ...] = ()) -> tuple[Field, object]:
    """A new field (with the given parameters registered) and a parsed germ."""
    field = Field()
    for name in params:
        field.parameter(name)
    return field, parse_poly(text, field)


def mk_series(field: Field, text: str):
    return parse_series(text, field)


@pytest.fixture
def field() -> Field:
    return Field()
