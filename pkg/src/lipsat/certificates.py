"""Certificate assembly and canonical serialization.

Certificates are plain dicts built in a fixed insertion order from exact
data: every order is an exact rational rendered as a string ("15", "15/2",
or "inf"), every coefficient is expression text in the input grammar, and
no floating-point value or timestamp ever enters.  Identical inputs
therefore produce byte-identical JSON.

The text renderer prints the same data as an indented outline; it adds no
information and drops none.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .algebra import Field, FieldElem
from .series import INF, OrderValue

TOOL = "lipsat"
VERSION = "0.1.0"

_DISPLAY_VARS = ("t", "s", "u", "v", "w", "tau")


def display_var(field: Field) -> str:
    """A series-variable name that cannot be confused with a parameter."""
    taken = set(field.parameters())
    for name in _DISPLAY_VARS:
        if name not in taken:
            return name
    i = 0
    while f"t{i}" in taken:
        i += 1
    return f"t{i}"


def frac_str(q) -> str:
    if q is None:
        return "none"
    if q is INF or q == float("inf"):
        return "inf"
    return str(Fraction(q))


def order_dict(ov: Optional[OrderValue], m: Optional[Fraction] = None) -> Optional[dict]:
    """Three-valued order as JSON: kind plus t-order, plus y-order when the
    t-per-y unit m is known."""
    if ov is None:
        return None
    if ov.is_zero:
        out = {"kind": "zero", "t": None}
        if m is not None:
            out["y"] = None
        return out
    out = {"kind": "exact" if ov.is_exact else "at_least", "t": frac_str(ov.value)}
    if m is not None:
        out["y"] = frac_str(Fraction(ov.value) / m)
    return out


def scalar_order(value, m: Optional[Fraction] = None) -> Optional[dict]:
    """An exact rational order (or INF) in both unit systems."""
    if value is None:
        return None
    out = {"t": frac_str(value)}
    if m is not None:
        out["y"] = (
            "inf" if (value is INF or value == float("inf")) else frac_str(Fraction(value) / m)
        )
    return out


def elem_str(e: Optional[FieldElem]) -> Optional[str]:
    return None if e is None else str(e)


def field_legend(field: Field) -> dict:
    radicals = {}
    for sym in field.radicals():
        radicals[sym.name] = {
            "degree": sym.degree,
            "radicand": elem_str(sym.radicand),
        }
    return {"parameters": field.parameters(), "radicals": radicals}


def membership_dict(rep, m: Optional[Fraction] = None) -> dict:
    return {
        "verdict": rep.verdict,
        "stage": rep.stage,
        "pivot_index": rep.pivot_index,
        "pivot_order": scalar_order(rep.pivot_order, m),
        "ideal_order": scalar_order(rep.ideal_order, m),
        "test_first_order": order_dict(rep.v1_order, m),
        "residual_order": order_dict(rep.residual_order, m),
        "witness_leading": elem_str(rep.witness_leading),
        "work_t": frac_str(rep.work),
    }


def pair_check_dict(res, var: str, label: Optional[dict] = None) -> dict:
    m = Fraction(res.ram) if res.ram else None
    return {
        "pair": label or {},
        "delta": {
            "coordinate": res.delta_coord,
            "order": scalar_order(res.delta_order_t, m),
        },
        "e_orders": [order_dict(res.e_orders[0], m), order_dict(res.e_orders[1], m)],
        "g_orders": [order_dict(res.g_orders[0], m), order_dict(res.g_orders[1], m)],
        "det_order": order_dict(res.det_order, m),
        "threshold": scalar_order(res.threshold_t, m),
        "leading": _leading_dict(res.leading),
        "criterion": "general-engine",
        "order_identities": res.checks,
        "membership": membership_dict(res.membership, m),
    }


def _leading_dict(leading: Optional[dict]) -> Optional[dict]:
    if leading is None:
        return None
    return {
        "e": [elem_str(leading["e"][0]), elem_str(leading["e"][1])],
        "g": [elem_str(leading["g"][0]), elem_str(leading["g"][1])],
        "det": elem_str(leading["det"]),
    }


def pair_curve_dict(pair, var: str) -> dict:
    return {
        "x1": pair.x1.render(var),
        "y1": pair.y1.render(var),
        "x2": pair.x2.render(var),
        "y2": pair.y2.render(var),
    }


def branch_dict(branch, var: str) -> dict:
    x, y = branch.parametrization(0)
    return {
        "x": x.render(var),
        "y": y.render(var),
        "ram": branch.ram,
        "exact": branch.is_exact(),
        "path": [list(step) for step in branch.path],
    }


def expansion_dict(expansion, var: str) -> dict:
    return {
        "vertical_multiplicity": expansion.vertical_multiplicity,
        "precision": expansion.precision,
        "branches": [branch_dict(b, var) for b in expansion.branches],
    }


def direction_dict(direction, name: Optional[str]) -> dict:
    a, b = direction
    return {"a": elem_str(a), "b": elem_str(b), "parameter": name}


def saturation_dict(report, var: str) -> dict:
    out = {
        "direction": direction_dict(report.direction, report.direction_name),
        "polar": str(report.polar),
        "precision": report.precision,
        "escalations": report.escalations,
        "outcome": report.verdict,
        "reason": report.reason,
    }
    if report.expansion is not None:
        out["expansion"] = expansion_dict(report.expansion, var)
    pairs = []
    for pp, res in report.pairs:
        label = dict(pp.curve.label or {})
        entry = pair_check_dict(res, var, label=label)
        entry["parametrizations"] = pair_curve_dict(pp.curve, var)
        pairs.append(entry)
    out["pairs"] = pairs
    if report.witness is not None:
        w = report.witness
        out["witness"] = {
            "pair": w.get("pair") or {},
            "stage": w.get("stage"),
            "residual_order": order_dict(w.get("residual_order")),
            "ideal_order": scalar_order(w.get("ideal_order")),
        }
    else:
        out["witness"] = None
    return out


def aggregate_outcome(outcomes) -> str:
    agg = "PASS_POLAR"
    seen = list(outcomes)
    if any(o == "FAIL" for o in seen):
        return "FAIL"
    if any(o == "INDETERMINATE" for o in seen):
        return "INDETERMINATE"
    if seen and all(o == "PASS" for o in seen):
        return "PASS"
    return agg


EXIT_CODES = {
    "PASS": 0,
    "PASS_POLAR": 0,
    "FAIL": 1,
    "INDETERMINATE": 2,
    "ERROR": 3,
}


def exit_code(outcome: str) -> int:
    return EXIT_CODES.get(outcome, 3)


def certificate_shell(command: str, inputs: dict) -> dict:
    return {
        "tool": TOOL,
        "version": VERSION,
        "command": command,
        "inputs": inputs,
    }


def error_certificate(command: str, inputs: dict, exc: BaseException) -> dict:
    cert = certificate_shell(command, inputs)
    cert["error"] = {"type": type(exc).__name__, "message": str(exc)}
    cert["outcome"] = "ERROR"
    return cert


def _assert_jsonable(x, path="$"):
    if x is None or isinstance(x, (str, bool, int)):
        return
    if isinstance(x, float):
        raise TypeError(f"floating value leaked into certificate at {path}: {x!r}")
    if isinstance(x, dict):
        for k, v in x.items():
            if not isinstance(k, str):
                raise TypeError(f"non-string key at {path}: {k!r}")
            _assert_jsonable(v, f"{path}.{k}")
        return
    if isinstance(x, (list, tuple)):
        for i, v in enumerate(x):
            _assert_jsonable(v, f"{path}[{i}]")
        return
    raise TypeError(f"unserializable value at {path}: {type(x).__name__}")


def canonical_json(cert: dict) -> str:
    _assert_jsonable(cert)
    return json.dumps(cert, indent=2, ensure_ascii=True, sort_keys=False)


def _membership_statement(m: dict):
    """Ideal-containment one-liner, e.g. 't^15 in (t^17): FALSE'."""
    res, ideal = m.get("residual_order"), m.get("ideal_order")
    verdict = m.get("verdict")
    if not (isinstance(res, dict) and isinstance(ideal, dict)):
        return None
    rt, it = res.get("t"), ideal.get("t")
    if rt is None or it is None or verdict not in ("PASS", "FAIL"):
        return None
    shown = rt if res.get("kind") == "exact" else f"(>={rt})"
    return f"t^{shown} in (t^{it}): {'TRUE' if verdict == 'PASS' else 'FALSE'}"


def render_text(value, indent: int = 0) -> str:
    """Indented-outline rendering of exactly the JSON data."""
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return pad + "(empty)"
        lines = []
        statement = _membership_statement(value)
        if statement is not None:
            lines.append(f"{pad}statement: {statement}")
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar_text(v)}")
        return "\n".join(lines)
    if isinstance(value, list):
        if not value:
            return pad + "(none)"
        lines = []
        for v in value:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar_text(v)}")
        return "\n".join(lines)
    return pad + _scalar_text(value)


def _scalar_text(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return "(empty)" if not v else repr(v)
    return str(v)
