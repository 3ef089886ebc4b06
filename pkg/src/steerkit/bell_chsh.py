"""CHSH maximal violation, the Bell-diagonal relation, bound checks, and
the (N, S) region scan over sampled zero states."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParamOutOfDomain
from .analytic import delta_values_batch
from .qstate import PauliRepresentation, XStateParams
from .tolerances import DEFAULT, Tolerances

TWO_ROOT_TWO = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class RegionSample:
    n_value: float
    s_value: float
    params: XStateParams


@dataclass(frozen=True)
class RegionScanConfig:
    count: int
    seed: int = 0
    #: which samplers contribute, in emission order
    mix: tuple = ("bell_diagonal", "t3zero_x")


def chsh_max(p: PauliRepresentation) -> float:
    """Largest CHSH expectation: 2 sqrt of the top two eigenvalues of T^T T.

    A symmetric eigensolve is used rather than the closed-form cubic; it
    is exact at degeneracies and just as fast at this size.
    """
    m = p.T.T @ p.T
    evals = np.linalg.eigvalsh(m)
    return 2.0 * math.sqrt(max(float(evals[1] + evals[2]), 0.0))


def bell_diagonal_steerability(c, tol: Tolerances = DEFAULT) -> float:
    """max(N^2/4 - 1, 0) for T = diag(c), a = b = 0."""
    c = np.asarray(c, float)
    if c.shape != (3,):
        raise ParamOutOfDomain(f"expected 3 correlation values, got shape {c.shape}")
    signs = np.array([[-1, -1, -1], [-1, 1, 1], [1, -1, 1], [1, 1, -1]], float)
    evals = 0.25 * (1.0 + signs @ c)
    if evals.min() < -tol.psd:
        raise ParamOutOfDomain(
            f"c = {c.tolist()} outside the physical tetrahedron (eig {evals.min():.3e})"
        )
    csq = c * c
    return max(float(csq.sum() - csq.min() - 1.0), 0.0)


def corollary_bounds(sample: RegionSample, tol: Tolerances = DEFAULT):
    """Check S <= N/2 (meaningful for N <= 2) and report the slack."""
    slack = sample.n_value / 2.0 - sample.s_value
    if sample.n_value > 2.0:
        return True, slack
    return sample.s_value <= sample.n_value / 2.0 + tol.corollary, slack


def bound_saturation_residuals(p: XStateParams) -> dict:
    """Residuals of the recorded equality conditions at the S = N/2 boundary.

    All-zero residuals on any one entry put the state on the extremal set:
    either both local z-components vanish, or one of the two positivity
    blocks of the X-matrix is saturated.
    """
    return {
        "a3_b3_zero": max(abs(p.a3), abs(p.b3)),
        "block_plus": abs((1 + p.c3) ** 2 - (p.a3 + p.b3) ** 2 - (p.c1 - p.c2) ** 2),
        "block_minus": abs((1 - p.c3) ** 2 - (p.a3 - p.b3) ** 2 - (p.c1 + p.c2) ** 2),
    }


def _x_psd_mask(a3, b3, c1, c2, c3, slack: float):
    ok = (1 + c3) ** 2 - (a3 + b3) ** 2 >= (c1 - c2) ** 2 - slack
    ok &= (1 - c3) ** 2 - (a3 - b3) ** 2 >= (c1 + c2) ** 2 - slack
    for sa in (1, -1):
        for sb in (1, -1):
            ok &= 1 + sa * a3 + sb * b3 + sa * sb * c3 >= -slack
    return ok


def _top_two_sq(c1, c2, c3):
    sq = np.stack([c1 * c1, c2 * c2, c3 * c3])
    return sq.sum(axis=0) - sq.min(axis=0)


def _sample_bell_diagonal(rng, n, tol):
    out = []
    while len(out) < n:
        c = rng.uniform(-1.0, 1.0, size=(2 * n + 64, 3))
        signs = np.array([[-1, -1, -1], [-1, 1, 1], [1, -1, 1], [1, 1, -1]], float)
        keep = ((1.0 + c @ signs.T) >= 0.0).all(axis=1)
        for row in c[keep]:
            out.append(row)
            if len(out) == n:
                break
    samples = []
    for c1, c2, c3 in out:
        sq = c1 * c1 + c2 * c2 + c3 * c3
        top2 = sq - min(c1 * c1, c2 * c2, c3 * c3)
        samples.append(
            RegionSample(
                2.0 * math.sqrt(top2),
                max(top2 - 1.0, 0.0),
                XStateParams(0.0, 0.0, float(c1), float(c2), float(c3)),
            )
        )
    return samples


def _sample_t3zero_x(rng, n, tol):
    """X-states with a3 = b3 c3, which makes t3 exactly zero."""
    rows = []
    while len(rows) < n:
        m = 4 * n + 256
        b3 = rng.uniform(-0.999, 0.999, m)
        c1 = rng.uniform(-1.0, 1.0, m)
        c2 = rng.uniform(-1.0, 1.0, m)
        c3 = rng.uniform(-1.0, 1.0, m)
        a3 = b3 * c3
        keep = _x_psd_mask(a3, b3, c1, c2, c3, 0.0)
        for idx in np.flatnonzero(keep):
            rows.append((a3[idx], b3[idx], c1[idx], c2[idx], c3[idx]))
            if len(rows) == n:
                break
    arr = np.array(rows)
    a3, b3, c1, c2, c3 = arr.T
    root = np.sqrt(1.0 - b3 * b3)
    d1, d2, d3 = delta_values_batch(
        c1 / root, c2 / root, (c3 - a3 * b3) / (1.0 - b3 * b3), np.zeros(len(arr)), tol
    )
    s = np.clip(np.max(np.stack([d1, d2, d3]), axis=0), 0.0, None)
    n_vals = 2.0 * np.sqrt(_top_two_sq(c1, c2, c3))
    return [
        RegionSample(float(nv), float(sv), XStateParams(*map(float, row)))
        for nv, sv, row in zip(n_vals, s, arr)
    ]


_SAMPLERS = {
    "bell_diagonal": _sample_bell_diagonal,
    "t3zero_x": _sample_t3zero_x,
}


def region_scan(cfg: RegionScanConfig, tol: Tolerances = DEFAULT):
    """Seeded scan of zero states; returns RegionSamples in draw order."""
    if cfg.count < 0:
        raise ParamOutOfDomain("count must be nonnegative")
    unknown = [m for m in cfg.mix if m not in _SAMPLERS]
    if unknown:
        raise ParamOutOfDomain(f"unknown region sampler(s): {unknown}")
    rng = np.random.default_rng(cfg.seed)
    per = [cfg.count // len(cfg.mix)] * len(cfg.mix)
    for i in range(cfg.count - sum(per)):
        per[i] += 1
    out = []
    for name, n in zip(cfg.mix, per):
        if n:
            out.extend(_SAMPLERS[name](rng, n, tol))
    return out
