"""Command-line interface: parse inputs, dispatch, emit certificates.

Subcommands:

    polar <f> [--dir a,b|generic]        polar branches, contacts, packets
    check-is <f> <g> [--dirs ...]        membership scan over polar pairs
    check-family <F> --params t[,u...]   parameter derivatives of a family
    check-fiberwise <F> --pairs FILE     user-supplied fiber pairs
    hp <f> [--dir ...]                   initial-term data along exceptional lines
    wedge <p> <q> [--bound B] [--verify] monomial criteria comparison
    puiseux <P> [--prec K]               branch expansion only

Exit codes: 0 all PASS / PASS_POLAR; 1 some FAIL; 2 INDETERMINATE;
3 input or extension error (an error certificate is still emitted).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import certificates as cert
from .algebra import Field, FieldElem
from .criteria import engine_applicable, j0_bounds, wedge_table
from .errors import (
    HypothesisUnmet,
    IndeterminateOrder,
    LipsatError,
    NotAFiberPair,
    NotIsolated,
    PrecisionExceeded,
)
from .parsing import parse_pairs_file, parse_poly
from .polar import (
    contact_matrix,
    exceptional_lines,
    generic_direction,
    germ_check,
    hp_data,
    normalize_direction,
    packets,
    polar_expansion,
    polar_poly,
    shared_component_check,
    tangent_of_branch,
    tangent_ratio_check,
)
from .polynomials import Polynomial
from .puiseux import default_precision, newton_puiseux
from .saturation import check_fiber_pair, check_saturation_polar


DEFAULT_SCAN = "1,0;0,1;generic"


def _add_global_flags(parser: argparse.ArgumentParser, *, suppress: bool) -> None:
    """The global flags are accepted before or after the subcommand.

    Subcommand copies default to SUPPRESS so that, when a flag is absent in
    the subcommand position, the value parsed by the root parser survives
    the namespace merge.  (Each parser gets its own action objects: a shared
    parent would let set_defaults mutate the copies' defaults.)"""
    miss = argparse.SUPPRESS
    out = parser.add_mutually_exclusive_group()
    out.add_argument(
        "--json",
        action="store_true",
        default=miss if suppress else False,
        help="JSON certificate (default)",
    )
    out.add_argument(
        "--text",
        action="store_true",
        default=miss if suppress else False,
        help="plain-text rendering",
    )
    parser.add_argument(
        "--prec",
        type=int,
        default=miss if suppress else None,
        help="initial expansion precision",
    )
    parser.add_argument(
        "--max-prec",
        type=int,
        default=miss if suppress else 512,
        help="precision escalation cap",
    )


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="lipsat",
        description="membership tests in saturated Jacobian ideals along polar pairs",
    )
    _add_global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def add_command(name: str, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_text)
        _add_global_flags(sp, suppress=True)
        return sp

    sp = add_command("polar", "polar curve geometry")
    sp.add_argument("f")
    sp.add_argument("--dir", default="generic", help="a,b or 'generic'")

    sp = add_command("check-is", "saturation membership scan")
    sp.add_argument("f")
    sp.add_argument("g")
    sp.add_argument(
        "--dirs",
        default=DEFAULT_SCAN,
        help="semicolon-separated directions, each 'a,b' or 'generic'",
    )

    sp = add_command("check-family", "family equisingularity test")
    sp.add_argument("F")
    sp.add_argument("--params", required=True, help="comma-separated parameter names")
    sp.add_argument("--dirs", default=DEFAULT_SCAN)

    sp = add_command("check-fiberwise", "membership along supplied fiber pairs")
    sp.add_argument("F")
    sp.add_argument("--pairs", required=True, help="pairs file path")
    sp.add_argument("--g", default=None, help="test germ (default: F itself)")

    sp = add_command("hp", "initial-term data along exceptional tangent lines")
    sp.add_argument("f")
    sp.add_argument("--dir", default="generic")

    sp = add_command("wedge", "monomial criteria comparison table")
    sp.add_argument("p", type=int)
    sp.add_argument("q", type=int)
    sp.add_argument("--bound", type=int, default=8)
    sp.add_argument("--verify", action="store_true")

    sp = add_command("puiseux", "branch expansion")
    sp.add_argument("P")

    return p


# --------------------------------------------------------------------------
# direction handling
# --------------------------------------------------------------------------


def _parse_direction(
    spec: str, field: Field
) -> tuple[tuple[FieldElem, FieldElem], Optional[str], str]:
    spec = spec.strip()
    if spec == "generic":
        a, b, name = generic_direction(field)
        return (a, b), name, "generic"
    parts = spec.split(",")
    if len(parts) != 2:
        raise HypothesisUnmet(
            f"direction must be 'generic' or 'a,b', got {spec!r}"
        )
    comps = []
    for text in parts:
        poly = parse_poly(text.strip(), field)
        if not poly.is_constant():
            raise HypothesisUnmet(
                f"direction component {text.strip()!r} must be constant"
            )
        comps.append(poly.constant_term())
    direction = normalize_direction(field, (comps[0], comps[1]))
    return direction, None, spec


def _scan_directions(
    f: Polynomial,
    g: Polynomial,
    specs: str,
    precision: Optional[int],
    max_precision: int,
) -> tuple[list[dict], str]:
    """Run the membership scan in each direction; returns (sections, outcome)."""
    field = f.field
    var = cert.display_var(field)
    germ_check(f)
    sections = []
    outcomes = []
    items = [s for s in specs.split(";") if s.strip()]
    allow_skip = specs == DEFAULT_SCAN
    for pos, spec in enumerate(items):
        direction, name, label = _parse_direction(spec, field)
        try:
            report = check_saturation_polar(
                f,
                g,
                direction=direction,
                precision=precision,
                max_precision=max_precision,
            )
            section = cert.saturation_dict(report, var)
            section["direction"]["spec"] = label
            sections.append(section)
            outcomes.append(report.verdict)
            if report.verdict == "FAIL":
                # one failing pair already refutes membership; the scan
                # stops at the first witness and says so for the rest
                for rest in items[pos + 1 :]:
                    sections.append(
                        {
                            "direction": {"spec": rest.strip()},
                            "outcome": "NOT_SCANNED",
                            "reason": "scan stopped at the first failing direction",
                        }
                    )
                break
        except NotIsolated as exc:
            if label == "generic" or not allow_skip:
                raise
            # a default-scan coordinate direction may fail to define a
            # transverse polar; the scan notes it and moves on
            sections.append(
                {
                    "direction": {"spec": label},
                    "outcome": "SKIPPED",
                    "reason": str(exc),
                }
            )
    return sections, cert.aggregate_outcome(outcomes)


# --------------------------------------------------------------------------
# per-command handlers: each returns (certificate dict, outcome string)
# --------------------------------------------------------------------------


def _tangent_json(t: dict) -> dict:
    return {"line": t["line"], "slope": cert.elem_str(t.get("slope"))}


def _lines_json(lines: list[dict]) -> list[dict]:
    return [
        {
            "line": ln["line"],
            "slope": cert.elem_str(ln.get("slope")),
            "multiplicity": ln["multiplicity"],
        }
        for ln in lines
    ]


def _geometry_escalation(compute, precision, polar, max_precision):
    """Run compute(K), doubling K while truncation blocks a comparison.

    Geometry output (tangents, contacts, packets, initial terms) resolves at
    small orders, so the scan starts well below the membership default and
    relies on the honest IndeterminateOrder/PrecisionExceeded escalation."""
    K = precision if precision is not None else max(10, default_precision(polar) // 4)
    while True:
        try:
            return compute(K), K
        except (PrecisionExceeded, IndeterminateOrder):
            if K * 2 > max_precision:
                raise
            K *= 2


def cmd_polar(args) -> tuple[dict, str]:
    field = Field()
    f = parse_poly(args.f, field)
    germ_check(f)
    direction, name, label = _parse_direction(args.dir, field)
    polar = polar_poly(f, direction)
    shared_component_check(f, polar)
    var = cert.display_var(field)
    c = cert.certificate_shell("polar", {"f_raw": args.f, "f": str(f)})
    c["direction"] = cert.direction_dict(direction, name)
    c["direction"]["spec"] = label
    c["polar"] = str(polar)

    def compute(K):
        expansion = polar_expansion(polar, K)
        return {
            "expansion": cert.expansion_dict(expansion, var),
            "tangents": [
                _tangent_json(tangent_of_branch(b)) for b in expansion.branches
            ],
            "branch_contacts": [
                {"branches": [i, k], "contact_y": cert.frac_str(v)}
                for (i, k), v in sorted(contact_matrix(expansion).items())
            ],
            "packets": [
                {"contact_y": cert.frac_str(level["contact"]), "groups": level["groups"]}
                for level in packets(expansion)
            ],
        }

    try:
        data, K = _geometry_escalation(compute, args.prec, polar, args.max_prec)
    except (PrecisionExceeded, IndeterminateOrder) as exc:
        c["outcome"] = "INDETERMINATE"
        c["reason"] = f"{type(exc).__name__}: {exc}"
        c["field"] = cert.field_legend(field)
        return c, "INDETERMINATE"
    c.update(data)
    c["exceptional_lines"] = _lines_json(exceptional_lines(f))
    c["field"] = cert.field_legend(field)
    c["outcome"] = "PASS"
    return c, "PASS"


def cmd_check_is(args) -> tuple[dict, str]:
    field = Field()
    f = parse_poly(args.f, field)
    g = parse_poly(args.g, field)
    c = cert.certificate_shell(
        "check-is",
        {"f_raw": args.f, "f": str(f), "g_raw": args.g, "g": str(g)},
    )
    sections, outcome = _scan_directions(f, g, args.dirs, args.prec, args.max_prec)
    c["directions"] = sections
    c["field"] = cert.field_legend(field)
    c["outcome"] = outcome
    return c, outcome


def cmd_check_family(args) -> tuple[dict, str]:
    field = Field()
    F = parse_poly(args.F, field)
    params = [s.strip() for s in args.params.split(",") if s.strip()]
    if not params:
        raise HypothesisUnmet("--params needs at least one parameter name")
    c = cert.certificate_shell(
        "check-family", {"F_raw": args.F, "F": str(F), "params": params}
    )
    per_param = []
    outcomes = []
    for name in params:
        if name in ("x", "y"):
            raise HypothesisUnmet(f"{name!r} is a curve variable, not a parameter")
        g = F.diff_param(name)
        if g.is_zero():
            per_param.append(
                {
                    "parameter": name,
                    "derivative": "0",
                    "outcome": "PASS_POLAR",
                    "reason": "the derivative vanishes identically",
                }
            )
            outcomes.append("PASS_POLAR")
            continue
        sections, outcome = _scan_directions(
            F, g, args.dirs, args.prec, args.max_prec
        )
        per_param.append(
            {
                "parameter": name,
                "derivative": str(g),
                "directions": sections,
                "outcome": outcome,
            }
        )
        outcomes.append(outcome)
    c["parameters"] = per_param
    c["field"] = cert.field_legend(field)
    c["outcome"] = cert.aggregate_outcome(outcomes)
    return c, c["outcome"]


def cmd_check_fiberwise(args) -> tuple[dict, str]:
    field = Field()
    F = parse_poly(args.F, field)
    g = parse_poly(args.g, field) if args.g is not None else F
    with open(args.pairs, "r", encoding="utf-8") as fh:
        text = fh.read()
    pairs = parse_pairs_file(text, field)
    var = cert.display_var(field)
    c = cert.certificate_shell(
        "check-fiberwise",
        {
            "F_raw": args.F,
            "F": str(F),
            "g": str(g),
            "pairs_file": args.pairs,
        },
    )
    records = []
    outcomes = []
    had_error = False
    for pc in pairs:
        label = dict(pc.label or {})
        base = {"pair": label, "parametrizations": cert.pair_curve_dict(pc, var)}
        try:
            res = check_fiber_pair(F, pc, g)
            entry = cert.pair_check_dict(res, var, label=label)
            entry["parametrizations"] = cert.pair_curve_dict(pc, var)
            records.append(entry)
            outcomes.append(res.membership.verdict)
        except NotAFiberPair as exc:
            base["error"] = {"type": "NotAFiberPair", "message": str(exc)}
            records.append(base)
            had_error = True
        except (IndeterminateOrder, PrecisionExceeded) as exc:
            base["outcome"] = "INDETERMINATE"
            base["reason"] = f"{type(exc).__name__}: {exc}"
            records.append(base)
            outcomes.append("INDETERMINATE")
    c["pairs"] = records
    c["field"] = cert.field_legend(field)
    outcome = "ERROR" if had_error else cert.aggregate_outcome(outcomes)
    c["outcome"] = outcome
    return c, outcome


def cmd_hp(args) -> tuple[dict, str]:
    field = Field()
    f = parse_poly(args.f, field)
    germ_check(f)
    direction, name, label = _parse_direction(args.dir, field)
    polar = polar_poly(f, direction)
    shared_component_check(f, polar)
    var = cert.display_var(field)
    c = cert.certificate_shell("hp", {"f_raw": args.f, "f": str(f)})
    c["direction"] = cert.direction_dict(direction, name)
    c["direction"]["spec"] = label
    c["polar"] = str(polar)
    lines = exceptional_lines(f)
    c["exceptional_lines"] = _lines_json(lines)

    def compute(K):
        expansion = polar_expansion(polar, K)
        per_line = []
        for ln in lines:
            data = hp_data(f, ln, expansion)
            per_line.append(
                {
                    "line": _tangent_json(ln),
                    "sheets": [
                        {
                            "branch": d["branch"],
                            "sheet": d["sheet"],
                            "ord_f_y": cert.frac_str(d["ord_f_y_units"]),
                            "lead_f": cert.elem_str(d["lead_f"]),
                            "ord_fy_y": cert.frac_str(d["ord_fy_y_units"]),
                            "lead_fy": cert.elem_str(d["lead_fy"]),
                        }
                        for d in data["sheets"]
                    ],
                    "ratios": [
                        {
                            "sheet1": list(r["sheet1"]),
                            "sheet2": list(r["sheet2"]),
                            "ord_f_y": cert.frac_str(r["ord_f_y_units"]),
                            "ratio": cert.elem_str(r["ratio"]),
                        }
                        for r in data["ratios"]
                    ],
                }
            )
        return per_line, tangent_ratio_check(f, expansion)

    (per_line, reports), K = _geometry_escalation(
        compute, args.prec, polar, args.max_prec
    )
    c["precision"] = K
    c["lines"] = per_line
    c["pair_reports"] = [
        {
            "branches": list(r["branches"]),
            "tangent": _tangent_json(r["tangent"]),
            "ord_f_y": [cert.frac_str(v) for v in r["ord_f"]],
            "ord_fy_y": [cert.frac_str(v) for v in r["ord_fy"]],
            "ratio_f": cert.elem_str(r["ratio_f"]),
            "ratio_fy": cert.elem_str(r["ratio_fy"]),
            "deg_ratio_f": cert.frac_str(r["deg_ratio_f"]),
            "deg_ratio_fy": cert.frac_str(r["deg_ratio_fy"]),
            "degree_match": r["degree_match"],
            "initial_terms_equal": r["initial_terms_equal"],
            "corrected_equal": r["corrected_equal"],
            "ok": r["ok"],
        }
        for r in reports
    ]
    c["field"] = cert.field_legend(field)
    ok = all(r["ok"] for r in reports)
    c["outcome"] = "PASS" if ok else "FAIL"
    return c, c["outcome"]


def cmd_wedge(args) -> tuple[dict, str]:
    c = cert.certificate_shell(
        "wedge",
        {"p": args.p, "q": args.q, "bound": args.bound, "verify": args.verify},
    )
    rows = wedge_table(
        args.p,
        args.q,
        args.bound,
        verify=args.verify,
        precision=args.prec,
        max_precision=args.max_prec,
    )
    bounds = j0_bounds(args.p, args.q)
    c["j0_bounds"] = {
        "lipsat": cert.frac_str(bounds["lipsat"]),
        "fr": cert.frac_str(bounds["fr"]),
        "fr_alternate_reading": cert.frac_str(bounds["fr_alternate_reading"]),
    }
    table = []
    outcome = "PASS"
    for row in rows:
        entry = {
            "i": row.i,
            "j": row.j,
            "lipsat": row.lipsat_inequality,
            "fr": row.fr_inequality,
            "wedge": row.wedge,
        }
        if args.verify and engine_applicable(args.p, row.i):
            entry["engine_verdict"] = row.engine_verdict
            if row.engine_verdict == "INDETERMINATE":
                entry["agrees"] = None
                if outcome == "PASS":
                    outcome = "INDETERMINATE"
            else:
                agrees = (row.engine_verdict == "PASS_POLAR") == row.lipsat_inequality
                entry["agrees"] = agrees
                if not agrees:
                    outcome = "FAIL"
        table.append(entry)
    c["rows"] = table
    c["wedge_points"] = [[r.i, r.j] for r in rows if r.wedge]
    c["outcome"] = outcome
    return c, outcome


def cmd_puiseux(args) -> tuple[dict, str]:
    field = Field()
    P = parse_poly(args.P, field)
    var = cert.display_var(field)
    c = cert.certificate_shell("puiseux", {"P_raw": args.P, "P": str(P)})
    K = args.prec if args.prec is not None else default_precision(P)
    while True:
        try:
            expansion = newton_puiseux(P, K)
            break
        except (PrecisionExceeded, IndeterminateOrder) as exc:
            if K * 2 > args.max_prec:
                c["outcome"] = "INDETERMINATE"
                c["reason"] = f"{type(exc).__name__}: {exc}"
                c["field"] = cert.field_legend(field)
                return c, "INDETERMINATE"
            K *= 2
    c["expansion"] = cert.expansion_dict(expansion, var)
    c["sheet_count"] = sum(b.ram for b in expansion.branches)
    c["field"] = cert.field_legend(field)
    c["outcome"] = "PASS"
    return c, "PASS"


COMMANDS = {
    "polar": cmd_polar,
    "check-is": cmd_check_is,
    "check-family": cmd_check_family,
    "check-fiberwise": cmd_check_fiberwise,
    "hp": cmd_hp,
    "wedge": cmd_wedge,
    "puiseux": cmd_puiseux,
}


def _inputs_of(args) -> dict:
    skip = {"command", "json", "text", "prec", "max_prec"}
    out = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        out[key] = value
    return out


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        certificate, outcome = COMMANDS[args.command](args)
    except IndeterminateOrder as exc:
        certificate = cert.error_certificate(args.command, _inputs_of(args), exc)
        certificate["outcome"] = "INDETERMINATE"
        outcome = "INDETERMINATE"
    except PrecisionExceeded as exc:
        certificate = cert.error_certificate(args.command, _inputs_of(args), exc)
        certificate["outcome"] = "INDETERMINATE"
        outcome = "INDETERMINATE"
    except LipsatError as exc:
        certificate = cert.error_certificate(args.command, _inputs_of(args), exc)
        outcome = "ERROR"
    except OSError as exc:
        certificate = cert.error_certificate(args.command, _inputs_of(args), exc)
        outcome = "ERROR"
    if args.text:
        sys.stdout.write(cert.render_text(certificate) + "\n")
    else:
        sys.stdout.write(cert.canonical_json(certificate) + "\n")
    return cert.exit_code(outcome)


if __name__ == "__main__":
    sys.exit(main())
