"""Closed-form steerability for X-states and for the named families.

The closed-form route: reduce the map to the four scalars (u1, u2, u3, t3),
evaluate the three candidate maxima (Delta values) reached at the axes
pairs (x,y), (x,z), (y,z), and take the largest against zero.  Exact for
zero states; a guaranteed lower bound otherwise.

Family formulas are evaluated exactly as printed algebra.  At parameter
edges where a reduced state becomes pure these expressions are continuous
extensions of the interior values (branches that evaluate to NaN at a
removable 0/0 are dropped); callers who need the physical value at such
edges should go through steerability_x_analytic, which refuses with
SteeredStateSingular instead of extrapolating.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DomainError, SteeredStateSingular
from .optimizer import Method, OptimizerConfig, SteeringResult, maximize_steerability
from .qstate import XStateParams, _resolve_family, validate_density, x_matrix
from .steer_functional import AXES_PAIRS, Direction, axes_pair_angles
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True)
class XDerived:
    u1: float
    u2: float
    u3: float
    t3: float


class ZeroVerdict(Enum):
    certified_t3_zero = "certified_t3_zero"
    numerically_consistent = "numerically_consistent"
    inconsistent = "inconsistent"


@dataclass(frozen=True)
class ZeroStateClass:
    verdict: ZeroVerdict
    gap: float


def x_derived(p: XStateParams, direction: Direction = Direction.AtoB,
              tol: Tolerances = DEFAULT) -> XDerived:
    """The diagonal map scalars.  BtoA exchanges the roles of a3 and b3."""
    a3, b3 = (p.a3, p.b3) if direction is Direction.AtoB else (p.b3, p.a3)
    rest = 1.0 - b3 * b3
    if rest < tol.singular:
        raise SteeredStateSingular(f"1 - b3^2 = {rest:.3e} on the steered side")
    root = math.sqrt(rest)
    return XDerived(
        u1=p.c1 / root,
        u2=p.c2 / root,
        u3=(p.c3 - a3 * b3) / rest,
        t3=(a3 - b3 * p.c3) / rest,
    )


def delta_values(d: XDerived, tol: Tolerances = DEFAULT) -> tuple:
    """The three closed-form candidates for the steerability maximum."""
    u1s, u2s, u3s, t3s = d.u1 ** 2, d.u2 ** 2, d.u3 ** 2, d.t3 ** 2
    q = ((1.0 - d.t3) ** 2 - u3s) * ((1.0 + d.t3) ** 2 - u3s)
    if q < -tol.radicand:
        raise DomainError(f"axes-pair radicand {q:.3e} is negative")
    root_q = math.sqrt(max(q, 0.0))
    d1 = u1s + u2s - 1.0
    d2 = 0.5 * (u1s * (u3s - t3s) + u1s + u3s + t3s - 1.0 - (1.0 - u1s) * root_q)
    d3 = 0.5 * (u2s * (u3s - t3s) + u2s + u3s + t3s - 1.0 - (1.0 - u2s) * root_q)
    return (d1, d2, d3)


def delta_values_batch(u1, u2, u3, t3, tol: Tolerances = DEFAULT):
    """Vectorized delta_values for sampling scans; returns three arrays."""
    u1s, u2s, u3s, t3s = u1 * u1, u2 * u2, u3 * u3, t3 * t3
    q = ((1.0 - t3) ** 2 - u3s) * ((1.0 + t3) ** 2 - u3s)
    if q.size and q.min() < -tol.radicand:
        raise DomainError(f"axes-pair radicand {q.min():.3e} is negative")
    root_q = np.sqrt(np.clip(q, 0.0, None))
    d1 = u1s + u2s - 1.0
    d2 = 0.5 * (u1s * (u3s - t3s) + u1s + u3s + t3s - 1.0 - (1.0 - u1s) * root_q)
    d3 = 0.5 * (u2s * (u3s - t3s) + u2s + u3s + t3s - 1.0 - (1.0 - u2s) * root_q)
    return d1, d2, d3


def steerability_x_analytic(p: XStateParams, direction: Direction = Direction.AtoB,
                            tol: Tolerances = DEFAULT) -> SteeringResult:
    """Closed-form value at the winning axes pair; ties pick the first pair."""
    deltas = delta_values(x_derived(p, direction, tol), tol)
    best = max(deltas)
    idx = deltas.index(best)
    return SteeringResult(
        s=max(best, 0.0),
        direction=direction,
        angles=axes_pair_angles(AXES_PAIRS[idx]),
        method=Method.analytic_xstate,
        deltas=deltas,
        objective_at_opt=best,
    )


def classify_zero_state(p: XStateParams, direction: Direction = Direction.AtoB,
                        cfg: OptimizerConfig = OptimizerConfig(),
                        tol: Tolerances = DEFAULT) -> ZeroStateClass:
    """Certify t3 = 0, else compare the closed form against the optimizer.

    Certified states skip the numeric run (the closed form is exact there),
    so their reported gap is 0 by definition.
    """
    d = x_derived(p, direction, tol)
    if abs(d.t3) <= tol.zero_t3:
        return ZeroStateClass(ZeroVerdict.certified_t3_zero, 0.0)
    ana = steerability_x_analytic(p, direction, tol).s
    num = maximize_steerability(validate_density(x_matrix(p), tol), direction, cfg, tol).s
    gap = abs(ana - num)
    verdict = (
        ZeroVerdict.numerically_consistent if gap <= tol.zero_gap else ZeroVerdict.inconsistent
    )
    return ZeroStateClass(verdict, gap)


def _finite_max(*branches) -> float:
    vals = [b for b in branches if math.isfinite(b)]
    vals.append(0.0)
    return max(vals)


def family_steerability(name: str, params, direction: Direction = Direction.AtoB,
                        tol: Tolerances = DEFAULT):
    """Printed closed form for a family member.

    Returns (s, steerable, threshold_expr) where threshold_expr names the
    inequality that governs the steerable flag for this family/direction.
    """
    _, merged = _resolve_family(name, params)

    if name == "pure":
        a = merged["a"]
        s = 1.0 if 0.0 < abs(a) < 1.0 else 0.0
        return s, s > 0.0, "pure_partially_entangled"

    if name == "bell_diagonal":
        c = np.array([merged["c1"], merged["c2"], merged["c3"]])
        csq = c * c
        s = max(float(csq.sum() - csq.min() - 1.0), 0.0)
        return s, s > 0.0, "chsh_N_gt_2"

    if name == "x_state":
        p = XStateParams(merged["a3"], merged["b3"], merged["c1"], merged["c2"], merged["c3"])
        res = steerability_x_analytic(p, direction, tol)
        return res.s, res.s > 0.0, "axes_pair_delta_max"

    if name == "rho_x0":
        b3, c3 = merged["b3"], merged["c3"]
        if direction is Direction.AtoB:
            d1 = _nan_div(2.0 * c3 - 1.0 - b3, 1.0 - b3)
            d2 = _nan_div(c3 - b3, 1.0 - b3) * d1
            s = _finite_max(d1, d2)
            return s, s > 0.0, "rho_x0_2c3_gt_1_plus_b3"
        d1 = _nan_div(b3 + c3, 2.0 + b3 - c3)
        d2 = _nan_div(1.0 + b3, 2.0 + b3 - c3) * d1
        s = _finite_max(d1, d2)
        return s, s > 0.0, "rho_x0_(1+b3)(b3+c3)_gt_0"

    if name == "w_eta_chi":
        eta, chi = merged["eta"], merged["chi"]
        if direction is Direction.AtoB:
            head = 1.0 + eta * (chi - 2.0)
            s = _finite_max(
                _nan_div(head, eta * chi - 1.0),
                _nan_div(eta * head * (chi - 1.0), (1.0 - eta * chi) ** 2),
            )
            return s, s > 0.0, "eta_gt_1_over_(2-chi)"
        head = eta + eta * chi - 1.0
        den = 1.0 + eta * (chi - 1.0)
        s = _finite_max(_nan_div(eta * chi * head, den * den), _nan_div(head, den))
        return s, s > 0.0, "eta_gt_1_over_(1+chi)"

    if name == "w_v_theta":
        V, th = merged["V"], merged["theta"]
        if direction is Direction.AtoB:
            s = (1.0 - 2.0 * V) ** 2
            return s, s > 0.0, "V_ne_one_half"
        k2 = (1.0 - 2.0 * V) ** 2
        c2sq = math.cos(2.0 * th) ** 2
        s2sq = math.sin(2.0 * th) ** 2
        den = 1.0 - k2 * c2sq
        s = _finite_max(_nan_div(k2 - c2sq, den), _nan_div(s2sq * (k2 - c2sq), den * den))
        return s, s > 0.0, "abs_cos2theta_lt_abs_1_minus_2V"

    if name == "colour_noise":
        V, th = merged["V"], merged["theta"]
        s2sq = math.sin(2.0 * th) ** 2
        c2sq = math.cos(2.0 * th) ** 2
        s = _finite_max(_nan_div(V * V * s2sq, 1.0 - V * V * c2sq))
        return s, s > 0.0, "V_sin2theta_ne_0"

    # gen_isotropic
    V, th = merged["V"], merged["theta"]
    c2sq = math.cos(2.0 * th) ** 2
    s2sq = math.sin(2.0 * th) ** 2
    cos4 = math.cos(4.0 * th)
    d = 1.0 - V * V * c2sq
    w = (1.0 - V) * math.sqrt(max((1.0 + V) ** 2 - 4.0 * V * V * c2sq, 0.0))
    bterm = V * V * (1.0 + 2.0 * s2sq) - 1.0
    s = _finite_max(_nan_div((1.0 - V * V * cos4 + w) * (bterm - w), 4.0 * d * d))
    return s, bterm > w, "gi_1_plus_(1-V)root_lt_V^2(1+2sin^2_2theta)"


def _nan_div(num: float, den: float) -> float:
    if den == 0.0:
        return math.nan
    return num / den


def family_steering_result(name: str, params, direction: Direction = Direction.AtoB,
                           tol: Tolerances = DEFAULT) -> SteeringResult:
    """family_steerability wrapped in the common result record."""
    s, _steerable, _expr = family_steerability(name, params, direction, tol)
    return SteeringResult(
        s=s,
        direction=direction,
        angles=(),
        method=Method.closed_form_family,
        deltas=None,
        objective_at_opt=s,
    )
