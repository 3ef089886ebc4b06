import math

import numpy as np
import pytest

from steerkit import (
    DEFAULT,
    Direction,
    Method,
    NonFiniteObjective,
    OptimizerConfig,
    XStateParams,
    make_family,
    maximize_steerability,
    minimize_max,
    steerability_x_analytic,
    validate_density,
)
from steerkit.qstate import x_matrix

FAST = OptimizerConfig(grid_per_angle=12, top_k=6)


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(grid_per_angle=3)
    with pytest.raises(ValueError):
        OptimizerConfig(top_k=0)


def test_pure_state_reaches_one():
    dm = make_family("pure", {"a": 0.6})
    res = maximize_steerability(dm, Direction.AtoB, FAST)
    assert res.method is Method.numeric
    assert res.deltas is None
    assert res.s == pytest.approx(1.0, abs=1e-9)


def test_bell_diagonal_matches_relation():
    for c in ([0.8, -0.8, 0.8], [0.9, 0.9, -0.9], [0.5, -0.4, 0.3]):
        dm = make_family("bell_diagonal", dict(zip(("c1", "c2", "c3"), c)))
        res = maximize_steerability(dm, Direction.AtoB, FAST)
        csq = np.square(c)
        expect = max(csq.sum() - csq.min() - 1.0, 0.0)
        assert res.s == pytest.approx(expect, abs=1e-9)


def test_angles_reported_in_standard_ranges():
    dm = make_family("bell_diagonal", {"c1": 0.8, "c2": -0.8, "c3": 0.8})
    res = maximize_steerability(dm, Direction.AtoB, FAST)
    a0, b0, a1, b1 = res.angles
    for a in (a0, a1):
        assert 0.0 <= a <= math.pi
    for b in (b0, b1):
        assert 0.0 <= b < 2 * math.pi


def test_deterministic_repeat():
    dm = make_family("w_eta_chi", {"eta": 0.8, "chi": 0.5})
    r1 = maximize_steerability(dm, Direction.AtoB, FAST)
    r2 = maximize_steerability(dm, Direction.AtoB, FAST)
    assert r1.s == r2.s
    assert r1.angles == r2.angles


def test_seeded_jitter_finds_same_optimum():
    dm = make_family("w_eta_chi", {"eta": 0.8, "chi": 0.5})
    base = maximize_steerability(dm, Direction.AtoB, FAST)
    jit = maximize_steerability(
        dm, Direction.AtoB, OptimizerConfig(grid_per_angle=12, top_k=6, seed=7)
    )
    assert jit.s == pytest.approx(base.s, abs=1e-8)


def test_numeric_never_below_analytic():
    rng = np.random.default_rng(17)
    count = 0
    while count < 15:
        a3, b3 = rng.uniform(-0.9, 0.9, 2)
        c1, c2, c3 = rng.uniform(-1.0, 1.0, 3)
        p = XStateParams(a3, b3, c1, c2, c3)
        if np.linalg.eigvalsh(x_matrix(p))[0] < 0.0:
            continue
        count += 1
        dm = validate_density(x_matrix(p))
        for d in (Direction.AtoB, Direction.BtoA):
            ana = steerability_x_analytic(p, d).s
            num = maximize_steerability(dm, d, FAST).s
            assert num >= ana - 1e-9, (p, d)


def test_minimize_max_two_anchors():
    # max of squared distances to (+1,0,0) and (-1,0,0): the min sits at the
    # origin with value 1
    anchors = np.array([[1.0, 0, 0], [-1.0, 0, 0]])

    def f(pts):
        diff = pts[:, None, :] - anchors[None, :, :]
        return np.einsum("mkj,mkj->mk", diff, diff)

    point, value = minimize_max(f, FAST)
    assert value == pytest.approx(1.0, abs=1e-6)
    assert np.allclose(point, [0, 0, 0], atol=1e-3)


def test_minimize_max_expands_box():
    target = np.array([3.0, 0.0, 0.0])

    def f(pts):
        diff = pts - target
        return np.einsum("mj,mj->m", diff, diff)[:, None]

    point, value = minimize_max(f, FAST, box=2.0)
    assert value == pytest.approx(0.0, abs=1e-6)
    assert np.allclose(point, target, atol=1e-3)


def test_minimize_max_skips_infeasible_points():
    # one branch is infinite on the x > 0 half; the solver must settle on
    # the feasible side
    def f(pts):
        base = np.einsum("mj,mj->m", pts + [1.0, 0, 0], pts + [1.0, 0, 0])
        wall = np.where(pts[:, 0] > 0.0, np.inf, 0.0)
        return np.stack([base, wall], axis=1)

    point, value = minimize_max(f, FAST)
    assert point[0] <= 0.0
    assert value == pytest.approx(0.0, abs=1e-6)


def test_minimize_max_all_infeasible():
    def f(pts):
        return np.full((pts.shape[0], 2), np.inf)

    with pytest.raises(NonFiniteObjective):
        minimize_max(f, FAST)


def test_minimize_max_rejects_bad_branch_shape():
    with pytest.raises(ValueError):
        minimize_max(lambda pts: np.zeros(pts.shape[0]), FAST)
