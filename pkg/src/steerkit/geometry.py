"""Steering radius via explicit local-hidden-state models, and the
steering-ellipsoid center and volume for canonical X-states.

The radius construction: for the axes pair (x, z) or (y, z) a three-
parameter family (z1, z3, Z) of four-state models reproduces the
assemblage exactly; the radius contribution of the pair is the min over
the parameters of the largest hidden-state Bloch norm.  The (x, y) pair
needs no search, its radius is sqrt(c1^2 + c2^2 + b3^2).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateWeight, SteeredStateSingular
from .optimizer import OptimizerConfig, minimize_max
from .qstate import XStateParams
from .steer_functional import Direction
from .tolerances import DEFAULT, Tolerances


@dataclass(frozen=True)
class RadiusSearchPoint:
    z1: float
    z3: float
    Z: float


@dataclass(frozen=True)
class RadiusResult:
    radius: float
    branch: str
    point: Optional[RadiusSearchPoint]
    per_branch: tuple


@dataclass(frozen=True)
class EllipsoidResult:
    center_z: float
    volume: float


def _swap_x(p: XStateParams) -> XStateParams:
    return XStateParams(p.b3, p.a3, p.c1, p.c2, p.c3)


def hidden_state_bloch(p: XStateParams, pt: RadiusSearchPoint, pair: str,
                       mu: int, v: int, tol: Tolerances = DEFAULT):
    """Weight and Bloch vector of one member of the four-state model.

    The caller passes parameters as seen from the steering side (apply the
    party swap first for the reverse direction).  pair selects which
    transverse correlation enters: c1 for "xz", c2 for "yz".
    """
    if pair not in ("xz", "yz"):
        raise ValueError(f"pair must be 'xz' or 'yz', got {pair!r}")
    if mu not in (1, -1) or v not in (1, -1):
        raise ValueError("mu and v must be +1 or -1")
    rest = 1.0 - p.b3 * p.b3
    if rest < tol.singular:
        raise SteeredStateSingular(f"1 - b3^2 = {rest:.3e}")
    den = 1.0 + mu * p.a3 + v * (p.b3 * pt.z3 + pt.Z)
    if den <= tol.weight_floor:
        raise DegenerateWeight(f"weight denominator {den:.3e}")
    c_perp = p.c1 if pair == "xz" else p.c2
    m_perp = mu * v * (c_perp + mu * math.sqrt(rest) * pt.z1)
    m_z = p.b3 + mu * p.c3 + v * (pt.z3 + p.b3 * pt.Z)
    bloch = np.zeros(3)
    bloch[0 if pair == "xz" else 1] = m_perp / den
    bloch[2] = m_z / den
    return den / 4.0, bloch


def _branch_fn(p: XStateParams, pair: str, tol: Tolerances):
    """Vectorized |bloch| over the four (mu, v) sign branches."""
    c_perp = p.c1 if pair == "xz" else p.c2
    root = math.sqrt(1.0 - p.b3 * p.b3)

    def f(points: np.ndarray) -> np.ndarray:
        z1, z3, Z = points[:, 0], points[:, 1], points[:, 2]
        cols = []
        for mu in (1, -1):
            for v in (1, -1):
                den = 1.0 + mu * p.a3 + v * (p.b3 * z3 + Z)
                num = (c_perp + mu * root * z1) ** 2 + (
                    p.b3 + mu * p.c3 + v * (z3 + p.b3 * Z)
                ) ** 2
                with np.errstate(divide="ignore", invalid="ignore"):
                    val = np.where(den > tol.weight_floor, np.sqrt(num) / den, np.inf)
                cols.append(val)
        return np.stack(cols, axis=1)

    return f


def steering_radius(p: XStateParams, direction: Direction = Direction.AtoB,
                    cfg: OptimizerConfig = OptimizerConfig(),
                    tol: Tolerances = DEFAULT) -> RadiusResult:
    """Radius of the optimal two-setting hidden-state model.

    On the zero set the radius is the largest of the three axes-pair
    values.  Off it the z-containing pair models are no longer certified
    (their conditional states can sit on the Bloch sphere for reasons
    unrelated to steering), so a warning is issued, the returned radius is
    the transverse-pair value, and the z-pair searches appear only in
    per_branch for inspection.
    """
    if direction is Direction.BtoA:
        p = _swap_x(p)
    rest = 1.0 - p.b3 * p.b3
    if rest < tol.singular:
        raise SteeredStateSingular(f"1 - b3^2 = {rest:.3e} on the steered side")
    t3 = (p.a3 - p.b3 * p.c3) / rest
    on_zero_set = abs(t3) <= tol.zero_t3
    if not on_zero_set:
        warnings.warn(
            f"steering_radius assumes a zero state; here t3 = {t3:.3e}, "
            "reporting the transverse-pair radius",
            stacklevel=2,
        )
    r_xy = math.sqrt(p.c1 ** 2 + p.c2 ** 2 + p.b3 ** 2)
    pt_xz, r_xz = minimize_max(_branch_fn(p, "xz", tol), cfg)
    pt_yz, r_yz = minimize_max(_branch_fn(p, "yz", tol), cfg)
    per = (r_xy, r_xz, r_yz)
    idx = int(np.argmax(per)) if on_zero_set else 0
    points = (None, RadiusSearchPoint(*pt_xz), RadiusSearchPoint(*pt_yz))
    return RadiusResult(float(per[idx]), ("xy", "xz", "yz")[idx], points[idx], per)


def steering_ellipsoid(p: XStateParams, direction: Direction = Direction.AtoB,
                       tol: Tolerances = DEFAULT) -> EllipsoidResult:
    """Center (z-component) and volume of the steered party's ellipsoid.

    AtoB: Alice measures, the ellipsoid of Bob's conditional states; the
    denominators carry a3.  BtoA: the mirror with b3.
    """
    steerer3 = p.a3 if direction is Direction.AtoB else p.b3
    other3 = p.b3 if direction is Direction.AtoB else p.a3
    rest = 1.0 - steerer3 * steerer3
    if rest < tol.singular:
        raise SteeredStateSingular(f"1 - a3^2 = {rest:.3e} on the measuring side")
    center = (other3 - steerer3 * p.c3) / rest
    volume = (4.0 * math.pi / 3.0) * abs(p.c1 * p.c2 * (p.c3 - p.a3 * p.b3)) / rest ** 2
    return EllipsoidResult(float(center), float(volume))
