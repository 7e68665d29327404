"""Membership testing in the pulled-back Jacobian double module along pairs.

For a pair of parametrized germs Phi = (phi_1, phi_2) and a curve f, the
module pulled back from the double of the Jacobian ideal is generated over
C[[t]] by

    (f_x . phi_1, f_x . phi_2),  (f_y . phi_1, f_y . phi_2),
    (0, (f_x . phi_2) * delta),  (0, (f_y . phi_2) * delta),

where delta is a minimal-order generator of the separation ideal
(x.phi_1 - x.phi_2, y.phi_1 - y.phi_2).  A test germ g is checked by reducing
the vector (g . phi_1, g . phi_2) against these generators over the discrete
valuation ring C[[t]]: first-component reduction against a pivot of minimal
exact order, then a second-component comparison against the residual ideal
order b.

Order bookkeeping is three-valued (exact / lower bound / identically zero).
A PASS may rest on a lower bound that clears the threshold; a FAIL always
rests on an exact order strictly below it; anything unresolved escalates via
IndeterminateOrder so the caller can retry at higher precision and finally
report INDETERMINATE honestly.

Independent order identities (determinant order versus thresholds, bounded
ratio differences) are evaluated alongside the reduction whenever their
hypotheses resolve; a disagreement with the engine raises
InternalCriterionMismatch -- it would mean the implementation contradicts
itself, and no answer should be trusted.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    HypothesisUnmet,
    IndeterminateOrder,
    InternalCriterionMismatch,
    NotAFiberPair,
    PrecisionExceeded,
)
from .polar import (
    PairCurve,
    PolarPair,
    generic_direction,
    germ_check,
    polar_expansion,
    polar_pairs,
    polar_poly,
    shared_component_check,
)
from .polynomials import Polynomial
from .puiseux import CurveExpansion, default_precision
from .series import INF, OrderValue, PuiseuxSeries


@dataclass
class PairVector:
    first: PuiseuxSeries
    second: PuiseuxSeries


@dataclass
class MembershipReport:
    verdict: str  # "PASS" | "FAIL"
    stage: Optional[str]  # None | "pivot" | "residual"
    pivot_index: Optional[int]
    pivot_order: Optional[Fraction]  # t-units
    ideal_order: Union[Fraction, float, None]  # b (t-units); INF = residual must vanish
    v1_order: OrderValue
    residual_order: Optional[OrderValue]
    work: Fraction
    # leading coefficient of the failing series (residual or first component):
    # its vanishing locus is the exceptional set of parameter values for
    # which the generic verdict may differ
    witness_leading: Optional[object] = None


def _resolve_ideal_order(orders: list[OrderValue]) -> Union[Fraction, float]:
    exact = [ov.value for ov in orders if ov.is_exact]
    bounds = [ov.value for ov in orders if ov.is_bound]
    if exact:
        b = min(exact)
        low = [t for t in bounds if t < b]
        if low:
            raise IndeterminateOrder(
                "residual ideal order unresolved", lower_bound=min(low)
            )
        return b
    if bounds:
        raise IndeterminateOrder(
            "residual ideal order unresolved", lower_bound=min(bounds)
        )
    return INF


def module_membership(
    gens: list[PairVector], v: PairVector, work: Fraction
) -> MembershipReport:
    work = Fraction(work)
    firsts = [g.first.order() for g in gens]
    exact = [(ov.value, i) for i, ov in enumerate(firsts) if ov.is_exact]
    ov1 = v.first.order()

    if not exact:
        bounds = [ov.value for ov in firsts if ov.is_bound]
        if bounds:
            raise IndeterminateOrder(
                "pivot order unresolved", lower_bound=min(bounds)
            )
        # every generator has vanishing first component
        if ov1.is_exact:
            return MembershipReport(
                "FAIL", "pivot", None, None, None, ov1, None, work
            )
        if ov1.is_bound:
            raise IndeterminateOrder(
                "test vector unresolved against a vanishing pivot column",
                lower_bound=ov1.value,
            )
        rho = v.second
        residuals = [g.second for g in gens]
        return _ideal_stage(rho, residuals, None, None, ov1, work)

    a, pidx = min(exact)
    low = [ov.value for ov in firsts if ov.is_bound and ov.value < a]
    if low:
        raise IndeterminateOrder(
            "a generator order may undercut the pivot", lower_bound=min(low)
        )
    pivot = gens[pidx]
    zero = PuiseuxSeries.zero(pivot.first.field)
    # a diagonal vector reduced against a diagonal pivot cancels exactly,
    # which truncated division cannot see
    pivot_diag = _is_diagonal(pivot)

    residuals = []
    for i, gk in enumerate(gens):
        if i == pidx:
            continue
        ov = firsts[i]
        if ov.is_zero:
            residuals.append(gk.second)
        elif pivot_diag and _is_diagonal(gk):
            residuals.append(zero)
        else:
            q = gk.first.divide(pivot.first, work)
            residuals.append(gk.second - q * pivot.second)

    if ov1.is_exact and ov1.value < a:
        return MembershipReport(
            "FAIL", "pivot", pidx, a, None, ov1, None, work,
            witness_leading=v.first.leading()[1],
        )
    if ov1.is_bound and ov1.value < a:
        raise IndeterminateOrder(
            "test vector order unresolved at the pivot stage", lower_bound=ov1.value
        )
    if ov1.is_zero:
        rho = v.second
    elif pivot_diag and _is_diagonal(v):
        rho = zero
    else:
        q = v.first.divide(pivot.first, work)
        rho = v.second - q * pivot.second
    return _ideal_stage(rho, residuals, pidx, a, ov1, work)


def _is_diagonal(vec: PairVector) -> bool:
    if vec.first is vec.second:
        return True
    if not (vec.first.is_exact() and vec.second.is_exact()):
        return False
    return (vec.first - vec.second).is_identically_zero()


def _ideal_stage(
    rho: PuiseuxSeries,
    residuals: list[PuiseuxSeries],
    pidx: Optional[int],
    a: Optional[Fraction],
    ov1: OrderValue,
    work: Fraction,
) -> MembershipReport:
    ovr = rho.order()
    if ovr.is_zero:
        try:
            b = _resolve_ideal_order([r.order() for r in residuals])
        except IndeterminateOrder:
            b = None  # irrelevant: a vanishing residual is in every ideal
        return MembershipReport("PASS", None, pidx, a, b, ov1, ovr, work)
    b = _resolve_ideal_order([r.order() for r in residuals])
    if b is INF:
        if ovr.is_exact:
            return MembershipReport(
                "FAIL", "residual", pidx, a, b, ov1, ovr, work,
                witness_leading=rho.leading()[1],
            )
        raise IndeterminateOrder(
            "the residual must vanish identically but is only bounded",
            lower_bound=ovr.value,
        )
    if ovr.value >= b:
        return MembershipReport("PASS", None, pidx, a, b, ov1, ovr, work)
    if ovr.is_exact:
        return MembershipReport(
            "FAIL", "residual", pidx, a, b, ov1, ovr, work,
            witness_leading=rho.leading()[1],
        )
    raise IndeterminateOrder(
        "residual order unresolved against the ideal order", lower_bound=ovr.value
    )


# --------------------------------------------------------------------------
# pair-level checks
# --------------------------------------------------------------------------


def _compose(p: Polynomial, x: PuiseuxSeries, y: PuiseuxSeries) -> PuiseuxSeries:
    return p.subs_series({"x": x, "y": y})


def pair_module(f: Polynomial, pair: PairCurve) -> tuple[list[PairVector], PuiseuxSeries, str]:
    """The four generators, plus the separation series delta used for them."""
    field = f.field
    fx, fy = f.partial("x"), f.partial("y")
    fx1 = _compose(fx, pair.x1, pair.y1)
    fx2 = _compose(fx, pair.x2, pair.y2)
    fy1 = _compose(fy, pair.x1, pair.y1)
    fy2 = _compose(fy, pair.x2, pair.y2)
    delta, dcoord = pair.delta()
    zero = PuiseuxSeries.zero(field)
    gens = [
        PairVector(fx1, fx2),
        PairVector(fy1, fy2),
        PairVector(zero, fx2 * delta),
        PairVector(zero, fy2 * delta),
    ]
    return gens, delta, dcoord


def det_vector(g: Polynomial, f: Polynomial, pair: PairCurve) -> PuiseuxSeries:
    """(g.phi_1)(f_y.phi_2) - (g.phi_2)(f_y.phi_1)."""
    fy = f.partial("y")
    g1 = _compose(g, pair.x1, pair.y1)
    g2 = _compose(g, pair.x2, pair.y2)
    fy1 = _compose(fy, pair.x1, pair.y1)
    fy2 = _compose(fy, pair.x2, pair.y2)
    return g1 * fy2 - g2 * fy1


@dataclass
class PairCheckResult:
    membership: MembershipReport
    delta_coord: str
    delta_order_t: Fraction
    e_orders: tuple[OrderValue, OrderValue]  # f_y along phi_1, phi_2 (t-units)
    g_orders: tuple[OrderValue, OrderValue]  # g along phi_1, phi_2 (t-units)
    det_order: OrderValue
    threshold_t: Optional[Fraction]  # e1 + e2 + delta when both e's exact
    ram: Optional[int]  # common parameter exponent when y = t^ram
    checks: list[dict] = dataclass_field(default_factory=list)
    # leading coefficients (None when the order is not exact): keys
    # "e" and "g" map to per-parametrization pairs, "det" to one element
    leading: Optional[dict] = None


def _ge3(ov: OrderValue, threshold: Fraction) -> Optional[bool]:
    """Three-valued 'order >= threshold': None when unresolved."""
    if ov.is_zero:
        return True
    if ov.is_exact:
        return ov.value >= threshold
    return True if ov.value >= threshold else None


def _and3(*vals: Optional[bool]) -> Optional[bool]:
    if any(v is False for v in vals):
        return False
    if any(v is None for v in vals):
        return None
    return True


def _pair_ram(pair: PairCurve) -> Optional[int]:
    if not (pair.y1 - pair.y2).is_identically_zero():
        return None
    y = pair.y1
    if y.is_exact() and len(y.terms) == 1 and y.ram == 1:
        (k, c), = y.terms.items()
        if c.is_one():
            return k
    return None


def check_pair(
    f: Polynomial,
    pair: PairCurve,
    g: Polynomial,
    *,
    work: Optional[Fraction] = None,
    polar_context: bool = False,
    work_cap: Fraction = Fraction(4096),
) -> PairCheckResult:
    gens, delta, dcoord = pair_module(f, pair)
    fy1, fy2 = gens[1].first, gens[1].second
    g1 = _compose(g, pair.x1, pair.y1)
    g2 = _compose(g, pair.x2, pair.y2)
    delta_ord = delta.order().value  # delta() guarantees exactness
    e1, e2 = fy1.order(), fy2.order()
    i1, i2 = g1.order(), g2.order()
    threshold = None
    if e1.is_exact and e2.is_exact:
        threshold = e1.value + e2.value + delta_ord

    exact_inputs = all(
        s.is_exact() for s in (pair.x1, pair.y1, pair.x2, pair.y2)
    )
    if work is None:
        work = (threshold + 8) if threshold is not None else Fraction(64)
    work = Fraction(work)
    while True:
        try:
            membership = module_membership(gens, PairVector(g1, g2), work)
            break
        except IndeterminateOrder:
            if not exact_inputs or work * 2 > work_cap:
                raise
            work *= 2

    det = g1 * fy2 - g2 * fy1
    det_ov = det.order()

    def _lead(series, ov):
        return series.leading()[1] if ov.is_exact else None

    leading = {
        "e": (_lead(fy1, e1), _lead(fy2, e2)),
        "g": (_lead(g1, i1), _lead(g2, i2)),
        "det": _lead(det, det_ov),
    }

    checks: list[dict] = []
    if polar_context:
        checks = _coherence_gates(
            membership.verdict,
            e1,
            e2,
            i1,
            i2,
            delta_ord,
            det_ov,
            threshold,
            g1,
            g2,
            fy1,
            fy2,
        )

    return PairCheckResult(
        membership=membership,
        delta_coord=dcoord,
        delta_order_t=delta_ord,
        e_orders=(e1, e2),
        g_orders=(i1, i2),
        det_order=det_ov,
        threshold_t=threshold,
        ram=_pair_ram(pair),
        checks=checks,
        leading=leading,
    )


def _coherence_gates(
    verdict: str,
    e1: OrderValue,
    e2: OrderValue,
    i1: OrderValue,
    i2: OrderValue,
    delta_ord: Fraction,
    det_ov: OrderValue,
    threshold: Optional[Fraction],
    g1: PuiseuxSeries,
    g2: PuiseuxSeries,
    fy1: PuiseuxSeries,
    fy2: PuiseuxSeries,
) -> list[dict]:
    gates: list[dict] = []

    def record(name: str, applicable: bool, expected: Optional[bool]) -> None:
        if not applicable or expected is None:
            gates.append(
                {"name": name, "applicable": False, "expected": None, "agrees": None}
            )
            return
        want = "PASS" if expected else "FAIL"
        agrees = want == verdict
        gates.append(
            {"name": name, "applicable": True, "expected": want, "agrees": agrees}
        )
        if not agrees:
            raise InternalCriterionMismatch(
                f"{name}: reduction says {verdict}, order identity predicts {want}"
            )

    if threshold is None or not (e1.is_exact and e2.is_exact):
        return gates
    e1v, e2v = e1.value, e2.value

    # gate 1: determinant order clears the threshold -> membership is exactly
    # the intersection condition
    hyp1 = _ge3(det_ov, threshold)
    if hyp1 is True:
        record("det-dominant", True, _and3(_ge3(i1, e1v), _ge3(i2, e2v)))
    else:
        record("det-dominant", False, None)

    # gate 2: determinant order is extremal (equals min of the cross sums)
    if det_ov.is_exact and i1.is_exact and i2.is_exact:
        extremal = det_ov.value == min(i1.value + e2v, i2.value + e1v)
        if extremal:
            expected = _and3(
                _ge3(i1, e1v + delta_ord), _ge3(i2, e2v + delta_ord)
            )
            record("det-extremal", True, expected)
        else:
            record("det-extremal", False, None)
    else:
        record("det-extremal", False, None)

    # gate 3: bounded quotient difference plus intersection bounds
    target = delta_ord + 2
    try:
        ratio_diff = g1.divide(fy1, target) - g2.divide(fy2, target)
        ratio_ov = ratio_diff.order()
    except Exception:
        ratio_ov = None
    cond_int = _and3(_ge3(i1, e1v), _ge3(i2, e2v))
    if ratio_ov is not None:
        cond_ratio = _ge3(ratio_ov, delta_ord)
        expected3 = _and3(cond_int, cond_ratio)
        record("bounded-ratio", expected3 is not None, expected3)

        # gate 4: under boundedness, membership is the determinant threshold
        if cond_int is True and cond_ratio is True:
            det_vs = _ge3(det_ov, threshold)
            if det_vs is None and det_ov.is_exact:
                det_vs = det_ov.value >= threshold
            record("threshold-restatement", det_vs is not None, det_vs)
        else:
            record("threshold-restatement", False, None)
    else:
        record("bounded-ratio", False, None)
        record("threshold-restatement", False, None)
    return gates


# --------------------------------------------------------------------------
# polar-wide and family checks
# --------------------------------------------------------------------------


@dataclass
class SaturationReport:
    verdict: str  # "PASS_POLAR" | "FAIL" | "INDETERMINATE"
    reason: Optional[str]
    direction: tuple
    direction_name: Optional[str]
    polar: Polynomial
    expansion: Optional[CurveExpansion]
    pairs: list
    witness: Optional[dict]
    precision: int
    escalations: int


def check_saturation_polar(
    f: Polynomial,
    g: Polynomial,
    direction=None,
    precision: Optional[int] = None,
    max_precision: int = 512,
) -> SaturationReport:
    germ_check(f)
    field = f.field
    dname = None
    if direction is None:
        a, b, dname = generic_direction(field)
        direction = (a, b)
    polar = polar_poly(f, direction)
    shared_component_check(f, polar)
    K = precision if precision is not None else default_precision(f, polar)
    max_precision = max(max_precision, K)
    polar_ctx = not direction[0].is_zero()
    escalations = 0
    while True:
        try:
            expansion = polar_expansion(polar, K)
            ppairs = polar_pairs(expansion)
            results = [
                (pp, check_pair(f, pp.curve, g, polar_context=polar_ctx))
                for pp in ppairs
            ]
            break
        except (IndeterminateOrder, PrecisionExceeded) as exc:
            if K * 2 > max_precision:
                return SaturationReport(
                    "INDETERMINATE",
                    f"{type(exc).__name__}: {exc}",
                    direction,
                    dname,
                    polar,
                    None,
                    [],
                    None,
                    K,
                    escalations,
                )
            K *= 2
            escalations += 1

    verdict = "PASS_POLAR"
    witness = None
    for pp, res in results:
        if res.membership.verdict == "FAIL":
            verdict = "FAIL"
            witness = {
                "pair": pp.curve.label or {},
                "stage": res.membership.stage,
                "residual_order": res.membership.residual_order,
                "ideal_order": res.membership.ideal_order,
            }
            break
    return SaturationReport(
        verdict,
        None,
        direction,
        dname,
        polar,
        expansion,
        results,
        witness,
        K,
        escalations,
    )


def check_family(
    F: Polynomial,
    param: str,
    direction=None,
    precision: Optional[int] = None,
    max_precision: int = 512,
) -> tuple[Polynomial, SaturationReport]:
    """Equisingularity test for a one-parameter family: the parameter
    derivative of F must pass the membership test along the polar pairs."""
    g = F.diff_param(param)
    report = check_saturation_polar(
        F, g, direction=direction, precision=precision, max_precision=max_precision
    )
    return g, report


def check_fiber_pair(
    f: Polynomial, pair: PairCurve, g: Polynomial, *, work: Optional[Fraction] = None
) -> PairCheckResult:
    """Pair check for externally supplied pairs lying in one fiber of f."""
    df = _compose(f, pair.x1, pair.y1) - _compose(f, pair.x2, pair.y2)
    ov = df.order()
    if ov.is_exact:
        raise NotAFiberPair(
            f"f takes different values along the two parametrizations "
            f"(difference has order {ov.value})"
        )
    return check_pair(f, pair, g, work=work, polar_context=False)


def check_derivative_vector(f: Polynomial, pair: PairCurve) -> MembershipReport:
    """Membership of (t d/dt)(f . phi_i) -- the infinitesimal scaling vector."""
    gens, _, _ = pair_module(f, pair)
    v1 = _compose(f, pair.x1, pair.y1).t_times_derivative()
    v2 = _compose(f, pair.x2, pair.y2).t_times_derivative()
    exact_inputs = all(s.is_exact() for s in (pair.x1, pair.y1, pair.x2, pair.y2))
    work = Fraction(64)
    while True:
        try:
            return module_membership(gens, PairVector(v1, v2), work)
        except IndeterminateOrder:
            if not exact_inputs or work * 2 > 4096:
                raise
            work *= 2


def fiber_self_check(f: Polynomial, pair: PairCurve) -> PairCheckResult:
    """Membership of f itself along a fiber pair."""
    return check_fiber_pair(f, pair, f)
