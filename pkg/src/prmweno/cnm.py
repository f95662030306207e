"""Numerical verification of mapping contact conditions.

A mapping claims a condition pair (n, m): derivatives 1..n vanish at dk with
the (n+1)-th nonzero, and at each endpoint the slope is 0 or 1 with
derivatives 2..m vanishing and the (m+1)-th nonzero (m = 0 only requires a
nonzero slope).  Orders are measured from the contact behavior of stable
deviation evaluations: if g(x0 + t) - g(x0) - s*t ~ C * t^p as t -> 0, the
log2 ratio of successive dyadic samples converges to p geometrically, which
pins the first non-vanishing derivative index without estimating eighth
derivatives in floating point.  First derivatives (slopes, and the reported
values at the contact order) use Richardson-extrapolated one-sided
differences of the same deviations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import math

import numpy as np

from .mappings import (MappingSpec, deviation_at_dk, eval_mapping,
                       identity_deviation_fn)

__all__ = [
    "CnmReport",
    "OrderRequirement",
    "ORDER_REQUIREMENTS",
    "check_cnm",
    "cnm_satisfied",
    "contact_order",
    "richardson_slope",
    "r_family_derivative_oracle",
]

MAX_DERIVATIVE_ORDER = 8
_MAX_LEVELS = 60
_SLOPE_TOL = 0.15       # accepted distance of a fitted exponent from an integer
_NOISE_FLOOR = 1e-13    # endpoint deviations below this are cancellation noise


# ---------------------------------------------------------------------------
# measurement primitives
# ---------------------------------------------------------------------------

def contact_order(dev, h0: float, rel_floor: float = 0.0):
    """Contact exponent p of dev(h) ~ C*h^p on h = h0 * 2^-l.

    dev must be callable on positive scalars and numerically stable in a
    relative sense; rel_floor > 0 discards samples whose magnitude has fallen
    under rel_floor (absolute), for deviations limited by cancellation.

    Returns (p, C, residual, ok); p is the float exponent estimate, C the
    matching coefficient at the deepest usable level, residual the spread of
    the fitted exponent, ok False when no stable dyadic tail exists.
    """
    hs, vals = [], []
    h = h0
    for _ in range(_MAX_LEVELS):
        v = dev(h)
        if not np.isfinite(v):
            break
        if v != 0.0 and abs(v) > rel_floor:
            hs.append(h)
            vals.append(abs(v))
        h *= 0.5
    if len(vals) < 4:
        return math.nan, math.nan, math.inf, False
    slopes = np.log2(np.array(vals[:-1]) / np.array(vals[1:]))
    # use the deepest run of mutually consistent slopes
    tail = slopes[-3:]
    for lo in range(len(slopes) - 3, -1, -1):
        cand = slopes[lo:]
        if np.ptp(cand[-5:]) < 0.02:
            tail = cand[-5:]
        else:
            break
    p = float(np.median(tail))
    residual = float(np.ptp(tail))
    c = vals[-1] / hs[-1] ** p
    return p, c, residual, True


def richardson_slope(dev, h0: float, levels: int = 12):
    """First derivative of dev at 0+ by Richardson extrapolation of one-sided
    differences dev(h)/h (dev(0) = 0 by construction).

    Returns (value, residual); Ridders-style stop when deeper levels degrade.
    """
    hs = [h0 * 0.5 ** i for i in range(levels)]
    col = [dev(h) / h for h in hs]
    best = col[-1]
    best_err = math.inf
    prev_col = col
    fac = 2.0
    for k in range(1, levels):
        nxt = []
        for i in range(len(prev_col) - 1):
            a, b = prev_col[i], prev_col[i + 1]
            val = (fac * b - a) / (fac - 1.0)
            nxt.append(val)
            err = abs(val - b) + abs(val - a)
            if err < best_err and np.isfinite(val):
                best, best_err = val, err
        prev_col = nxt
        fac *= 2.0
    return best, best_err


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

@dataclass
class CnmReport:
    """Measured contact behavior of one mapping at {0, dk, 1}."""

    spec: MappingSpec
    claimed_n: int
    claimed_m: int
    fixed_point_errors: dict
    order_at_dk: int            # vanishing order, min over the two sides
    order_dk_left: int
    order_dk_right: int
    order_at_0: int
    order_at_1: int
    endpoint_slope_0: float
    endpoint_slope_1: float
    deriv_np1_dk: float         # measured g^(n+1)(dk), right side
    monotone: bool
    residuals: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def summary(self) -> str:
        ok = cnm_satisfied(self, self.claimed_n, self.claimed_m)
        return (
            f"family={self.spec.family} dk={self.spec.dk:.6g} "
            f"claimed=({self.claimed_n},{self.claimed_m}) "
            f"measured dk=({self.order_dk_left},{self.order_dk_right}) "
            f"endpoints=({self.order_at_0},{self.order_at_1}) "
            f"slopes=({self.endpoint_slope_0:.3g},{self.endpoint_slope_1:.3g}) "
            f"monotone={self.monotone} -> {'PASS' if ok else 'FAIL'}"
        )


def _endpoint_order(spec: MappingSpec, at_one: bool):
    """(vanishing order, slope, residual) at an endpoint.

    Order q means: slope in {0, 1} and derivatives 2..q vanish with the
    (q+1)-th nonzero; q = 0 for any other slope (the first derivative is the
    first non-identity term).
    """
    dk = spec.dk
    if at_one:
        dev = lambda u: 1.0 - eval_mapping(spec, 1.0 - u)
        h0 = 0.25 * (1.0 - dk)
    else:
        dev = lambda u: eval_mapping(spec, u)
        h0 = 0.25 * dk
    slope, slope_res = richardson_slope(dev, h0 * 0.5)
    failures = []
    if not np.isfinite(slope):
        return 0, slope, math.inf, ["non-finite endpoint slope"]
    target = 0.0 if abs(slope) < 0.5 else 1.0
    if abs(slope - target) > max(1e-5, 10.0 * slope_res):
        # neither identity-like nor flat: order 0 (slope itself is the
        # first non-vanishing derivative)
        return 0, slope, slope_res, failures
    if target == 1.0:
        dev_id, stable = identity_deviation_fn(spec, at_one)
    else:
        dev_id, stable = dev, False
    p, _, res, ok = contact_order(dev_id, h0, rel_floor=0.0 if stable else _NOISE_FLOOR)
    if not ok:
        failures.append("no stable contact tail at endpoint")
        return 0, slope, math.inf, failures
    if abs(p - round(p)) > _SLOPE_TOL:
        failures.append(f"endpoint exponent {p:.3f} not near an integer")
        return max(int(round(p)) - 1, 0), slope, res, failures
    return int(round(p)) - 1, slope, res, failures


def check_cnm(spec: MappingSpec, n: int, m: int, grid: int = 10_000) -> CnmReport:
    """Measure the contact orders of spec and report them against claim (n, m)."""
    if n + 1 > MAX_DERIVATIVE_ORDER or m + 1 > MAX_DERIVATIVE_ORDER:
        raise ValueError(f"claimed orders ({n}, {m}) exceed the differentiation budget")
    dk = spec.dk
    failures: list[str] = []
    residuals: dict[str, float] = {}

    fp = {
        "dk": abs(eval_mapping(spec, dk) - dk),
        "0": abs(eval_mapping(spec, 0.0)),
        "1": abs(eval_mapping(spec, 1.0) - 1.0),
    }

    orders_sides = []
    h0 = 1e-2 * min(dk, 1.0 - dk)
    for side, label in ((+1.0, "dk_right"), (-1.0, "dk_left")):
        p, c, res, ok = contact_order(lambda h: deviation_at_dk(spec, side * h), h0)
        residuals[label] = res
        if not ok or not np.isfinite(p):
            failures.append(f"no stable contact tail on {label}")
            orders_sides.append(-1)
            continue
        if abs(p - round(p)) > _SLOPE_TOL:
            failures.append(f"{label} exponent {p:.3f} not near an integer")
        orders_sides.append(int(round(p)) - 1)
    order_right, order_left = orders_sides[0], orders_sides[1]

    # value of the first non-vanishing derivative at dk (right side)
    pR, cR, _, okR = contact_order(lambda h: deviation_at_dk(spec, h), h0)
    deriv = math.factorial(int(round(pR))) * cR * \
        math.copysign(1.0, deviation_at_dk(spec, h0 * 1e-6)) if okR else math.nan

    q0, s0, res0, f0 = _endpoint_order(spec, at_one=False)
    q1, s1, res1, f1 = _endpoint_order(spec, at_one=True)
    failures += f0 + f1
    residuals["0"] = res0
    residuals["1"] = res1

    w = np.linspace(0.0, 1.0, grid + 1)
    gw = eval_mapping(spec, w)
    monotone = bool((np.diff(gw) >= -1e-12).all())

    return CnmReport(
        spec=spec, claimed_n=n, claimed_m=m,
        fixed_point_errors=fp,
        order_at_dk=min(order_left, order_right),
        order_dk_left=order_left, order_dk_right=order_right,
        order_at_0=q0, order_at_1=q1,
        endpoint_slope_0=s0, endpoint_slope_1=s1,
        deriv_np1_dk=deriv,
        monotone=monotone,
        residuals=residuals,
        failures=failures,
    )


def cnm_satisfied(report: CnmReport, n: int, m: int, k: int | None = None,
                  fp_tol: float = 1e-12) -> bool:
    """True iff the measured orders equal the claim exactly.

    k is the endpoint order at 1 for asymmetric claims; it defaults to m.
    """
    if k is None:
        k = m
    if any(v > fp_tol for v in report.fixed_point_errors.values()):
        return False
    if report.order_dk_left != n or report.order_dk_right != n:
        return False
    if report.order_at_0 != m or report.order_at_1 != k:
        return False
    for q, s in ((m, report.endpoint_slope_0), (k, report.endpoint_slope_1)):
        if q >= 1:
            if not (abs(s) < 1e-5 or abs(s - 1.0) < 1e-5):
                return False
        elif abs(s) < 1e-8:
            # order 0 only forbids a vanishing first derivative
            return False
    return True


# ---------------------------------------------------------------------------
# closed-form derivative targets for the tabulated rational family
# ---------------------------------------------------------------------------

def r_family_derivative_oracle(n: int, m: int, c2: float, dk: float):
    """(g^(n+1)(dk), g^(m+1)(1)) closed forms for the tabulated recipe with
    free coefficient c2; raises KeyError outside the tabulated range."""
    e = 1.0 - dk
    at_dk = {
        (1, 0): 2.0 / ((c2 + 1.0) * e),
        (1, 1): 2.0 / (c2 * e ** 2),
        (2, 0): 6.0 / (c2 * e + e ** 2),
        (2, 1): 6.0 / (c2 * e ** 2 - e ** 2),
        (2, 2): 6.0 / (c2 * e ** 3),
        (3, 0): 24.0 / (c2 * e + e ** 3),
        (3, 1): 24.0 / (c2 * e ** 2 - 2.0 * e ** 3),
        (3, 2): 24.0 / (c2 * e ** 3),
        (3, 3): 24.0 / (c2 * e ** 4),
        (4, 0): 120.0 / (c2 * e + e ** 4),
        (4, 1): 120.0 / (c2 * e ** 2 - 3.0 * e ** 4),
        (4, 2): 120.0 / (c2 * e ** 3 + 3.0 * e ** 4),
        (4, 3): 120.0 / (c2 * e ** 4),
        (4, 4): 120.0 / (c2 * e ** 5),
    }
    at_one = {
        (1, 0): c2 + 2.0,
        (1, 1): -2.0 * c2,
        (2, 0): (c2 + 3.0 * e) / e,
        (2, 1): (-2.0 * c2 + 2.0) / e,
        (2, 2): 6.0 * c2 / e,
        (3, 0): (c2 + 4.0 * e ** 2) / e ** 2,
        (3, 1): (-2.0 * c2 + 6.0 * e) / e ** 2,
        (3, 2): 6.0 * c2 / e ** 2,
        (3, 3): -24.0 * c2 / e ** 2,
        (4, 0): (c2 + 5.0 * e ** 3) / e ** 3,
        (4, 1): (-2.0 * c2 + 12.0 * e ** 2) / e ** 3,
        (4, 2): (6.0 * c2 + 12.0 * e) / e ** 3,
        (4, 3): -24.0 * c2 / e ** 3,
        (4, 4): 120.0 * c2 / e ** 3,
    }
    return at_dk[(n, m)], at_one[(n, m)]


# ---------------------------------------------------------------------------
# achievable-order data for mapped and unmapped schemes at critical points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OrderRequirement:
    """Achievable orders at a critical point of order ncp for stencil order r.

    rc_js / rc_mapped are the orders the plain and mapped schemes reach;
    rcg_min is the smallest mapping contact order n that recovers the
    optimal order ("at least" valued); None marks entries with no recovery.
    """

    r: int
    ncp: int
    rc_js: int
    rc_mapped: int | None
    rcg_min: int | None


ORDER_REQUIREMENTS = (
    OrderRequirement(2, 0, 3, None, None),
    OrderRequirement(2, 1, 1, None, None),
    OrderRequirement(3, 0, 5, None, None),
    OrderRequirement(3, 1, 3, 5, 2),
    OrderRequirement(3, 2, 2, 2, None),
    OrderRequirement(4, 0, 7, None, None),
    OrderRequirement(4, 1, 5, 7, 2),
    OrderRequirement(4, 2, 4, 6, 3),
    OrderRequirement(4, 3, 3, 3, None),
    OrderRequirement(5, 0, 9, 9, None),
    OrderRequirement(5, 1, 7, 9, 2),
    OrderRequirement(5, 2, 6, 9, 2),
    OrderRequirement(5, 3, 5, 7, 4),
    OrderRequirement(5, 4, 4, 4, None),
)
# With the wide-stencil indicator upgrade the r=2 scheme recovers its
# optimal order already at contact order n >= 1.
UPGRADED_R2_RCG_MIN = 1
