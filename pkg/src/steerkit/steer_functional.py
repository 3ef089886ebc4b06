"""Steering as joint measurability of a pair of unsharp observables.

A measurement direction n on the steering side turns, after sandwiching
the conditional states with the steered party's inverse square root, into
a binary observable with bias x = V . n and vector part g = U n.  Two
directions are simultaneously explainable by a local model exactly when
those two observables are jointly measurable, and the violation of that
criterion is the objective the optimizer maximizes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import (
    DomainError,
    SteeredStateSingular,
    UnphysicalAssemblage,
)
from .qstate import CanonicalState, matrix_of
from .tolerances import DEFAULT, SENTINEL, Tolerances


class Direction(Enum):
    AtoB = "AtoB"
    BtoA = "BtoA"


@dataclass(frozen=True)
class MeasurementDirection:
    """Unit vector n = (sin a cos b, sin a sin b, cos a) from two angles."""

    alpha: float
    beta: float

    @property
    def n(self) -> np.ndarray:
        sa = math.sin(self.alpha)
        return np.array(
            [sa * math.cos(self.beta), sa * math.sin(self.beta), math.cos(self.alpha)]
        )


#: (alpha, beta) pairs for the coordinate axes, used as optimizer seeds and
#: for reporting the analytic optimum.
AXIS_ANGLES = {
    "x": (math.pi / 2, 0.0),
    "y": (math.pi / 2, math.pi / 2),
    "z": (0.0, 0.0),
}
AXES_PAIRS = (("x", "y"), ("x", "z"), ("y", "z"))


def axes_pair_angles(pair) -> tuple:
    a0, b0 = AXIS_ANGLES[pair[0]]
    a1, b1 = AXIS_ANGLES[pair[1]]
    return (a0, b0, a1, b1)


@dataclass(frozen=True)
class SteeringMap:
    U: np.ndarray
    V: np.ndarray
    direction: Direction
    source: CanonicalState


@dataclass(frozen=True)
class AssemblageObservable:
    x: float
    g: np.ndarray


def compute_map(s: CanonicalState, direction: Direction, tol: Tolerances = DEFAULT) -> SteeringMap:
    """Build U and V for the chosen steering direction.

    For BtoA the parties are exchanged first (a <-> b; the diagonal
    correlation matrix is its own transpose).  The scalar in front of the
    b b^T C term is written in the rationalized form
    1 / ((1 + sqrt(1-|b|^2)) (1-|b|^2)) which stays finite as |b| -> 0.
    """
    a, b = np.asarray(s.a, float), np.asarray(s.b, float)
    if direction is Direction.BtoA:
        a, b = b, a
    C = np.diag(np.asarray(s.c, float))
    bsq = float(b @ b)
    rest = 1.0 - bsq
    if rest < tol.singular:
        raise SteeredStateSingular(
            f"steered reduced state too pure: 1 - |b|^2 = {rest:.3e}"
        )
    root = math.sqrt(rest)
    k = 1.0 / ((1.0 + root) * rest)
    U = -np.outer(b, a) / rest + k * np.outer(b, b) @ C + C / root
    V = (a - C.T @ b) / rest
    return SteeringMap(U, V, direction, s)


def assemblage(smap: SteeringMap, n: MeasurementDirection, tol: Tolerances = DEFAULT) -> AssemblageObservable:
    """Observable (x, g) for one measurement direction."""
    vec = n.n
    g = smap.U @ vec
    x = float(smap.V @ vec)
    gn = float(np.linalg.norm(g))
    excess = gn - (1.0 - abs(x))
    if excess > tol.assemblage:
        raise UnphysicalAssemblage(
            f"|g| exceeds 1 - |x| by {excess:.3e}; map and state are inconsistent"
        )
    return AssemblageObservable(x, g)


def unsharp_f(x: float, g_norm: float, tol: Tolerances = DEFAULT) -> float:
    """F = (sqrt((1+x)^2 - g^2) + sqrt((1-x)^2 - g^2)) / 2.

    Radicands in [-radicand_tol, 0) are treated as exact zeros; anything
    more negative is a genuine domain violation.
    """
    return _f_value(x, g_norm * g_norm, tol.radicand)


def _f_value(x: float, g2: float, clamp: float) -> float:
    r_plus = (1.0 + x) ** 2 - g2
    r_minus = (1.0 - x) ** 2 - g2
    lo = min(r_plus, r_minus)
    if lo < -clamp:
        raise DomainError(f"radicand {lo:.3e} below -{clamp:.1e}")
    return 0.5 * (math.sqrt(max(r_plus, 0.0)) + math.sqrt(max(r_minus, 0.0)))


def objective_from_xg(x0: float, g0: np.ndarray, x1: float, g1: np.ndarray,
                      tol: Tolerances = DEFAULT) -> float:
    """S1 - S2 for two observables given as (bias, vector) pairs.

    Ratio convention: x^2/F^2 -> 0 when both F and |x| underflow (the
    sharp unbiased limit); if F underflows while x does not the point is
    degenerate and the sentinel is returned so maximizers reject it.
    Radicands are clamped at the assemblage tolerance because the inputs
    normally come out of a map evaluation with its own rounding.
    """
    g0sq = float(g0 @ g0)
    g1sq = float(g1 @ g1)
    f0 = _f_value(x0, g0sq, tol.assemblage)
    f1 = _f_value(x1, g1sq, tol.assemblage)
    ratios = []
    for x, f in ((x0, f0), (x1, f1)):
        if f < tol.sharp:
            if abs(x) >= tol.sharp:
                return SENTINEL
            ratios.append(0.0)
        else:
            ratios.append((x * x) / (f * f))
    # grouped sums keep the value bitwise-symmetric under argument swap
    s1 = (1.0 - (f0 * f0 + f1 * f1)) * (1.0 - (ratios[0] + ratios[1]))
    s2 = (float(g0 @ g1) - x0 * x1) ** 2
    return s1 - s2


def steering_objective(smap: SteeringMap, n0: MeasurementDirection,
                       n1: MeasurementDirection, tol: Tolerances = DEFAULT) -> float:
    o0 = assemblage(smap, n0, tol)
    o1 = assemblage(smap, n1, tol)
    return objective_from_xg(o0.x, o0.g, o1.x, o1.g, tol)


def is_jointly_measurable(o0: AssemblageObservable, o1: AssemblageObservable,
                          tol: Tolerances = DEFAULT) -> bool:
    """True when the incompatibility criterion value is at most the slack."""
    return objective_from_xg(o0.x, o0.g, o1.x, o1.g, tol) <= tol.jm


def sph_to_vec(alpha, beta) -> np.ndarray:
    """Angles to unit vectors; broadcasts over array input."""
    alpha = np.asarray(alpha, float)
    beta = np.asarray(beta, float)
    sa = np.sin(alpha)
    return np.stack([sa * np.cos(beta), sa * np.sin(beta), np.cos(alpha)], axis=-1)


def objective_batch(U: np.ndarray, V: np.ndarray, n0: np.ndarray, n1: np.ndarray,
                    tol: Tolerances = DEFAULT) -> np.ndarray:
    """Vectorized S1 - S2 over rows of direction pairs.

    n0, n1: arrays of shape (M, 3).  Degenerate sharp-biased rows get the
    sentinel.  A radicand below the assemblage tolerance aborts: that
    cannot happen for a map built from a validated state.
    """
    g0 = n0 @ U.T
    g1 = n1 @ U.T
    x0 = n0 @ V
    x1 = n1 @ V
    g0sq = np.einsum("ij,ij->i", g0, g0)
    g1sq = np.einsum("ij,ij->i", g1, g1)

    def f_of(x, gsq):
        rp = (1.0 + x) ** 2 - gsq
        rm = (1.0 - x) ** 2 - gsq
        lo = min(rp.min(), rm.min()) if rp.size else 0.0
        if lo < -tol.assemblage:
            raise DomainError(f"radicand {lo:.3e} below -{tol.assemblage:.1e}")
        return 0.5 * (np.sqrt(np.clip(rp, 0.0, None)) + np.sqrt(np.clip(rm, 0.0, None)))

    f0 = f_of(x0, g0sq)
    f1 = f_of(x1, g1sq)
    sharp0 = f0 < tol.sharp
    sharp1 = f1 < tol.sharp
    den0 = np.where(sharp0, 1.0, f0)
    den1 = np.where(sharp1, 1.0, f1)
    r0 = np.where(sharp0, 0.0, (x0 * x0) / (den0 * den0))
    r1 = np.where(sharp1, 0.0, (x1 * x1) / (den1 * den1))
    s1 = (1.0 - (f0 * f0 + f1 * f1)) * (1.0 - (r0 + r1))
    s2 = (np.einsum("ij,ij->i", g0, g1) - x0 * x1) ** 2
    out = s1 - s2
    bad = (sharp0 & (np.abs(x0) >= tol.sharp)) | (sharp1 & (np.abs(x1) >= tol.sharp))
    if bad.any():
        out = np.where(bad, SENTINEL, out)
    return out


def conditional_states(rho, n: np.ndarray, party: str = "A") -> tuple:
    """Unnormalized steered states (plus, minus outcome) for a projective
    measurement along n on the given party.  Reference implementation used
    to cross-check the (x, g) route in tests and the hidden-state models.
    """
    from .qstate import SIGMA

    m = matrix_of(rho).reshape(2, 2, 2, 2)
    nvec = np.asarray(n, float)
    pauli_n = np.einsum("k,kij->ij", nvec, SIGMA)
    out = []
    for kappa in (+1, -1):
        proj = 0.5 * (np.eye(2, dtype=complex) + kappa * pauli_n)
        if party == "A":
            out.append(np.einsum("ab,bkal->kl", proj, m))
        else:
            out.append(np.einsum("ab,ibja->ij", proj, m))
    return tuple(out)
