import dataclasses
import math

import numpy as np
import pytest

from steerkit import (
    DEFAULT,
    DomainError,
    Direction,
    MeasurementDirection,
    SENTINEL,
    SteeredStateSingular,
    UnphysicalAssemblage,
    XStateParams,
    assemblage,
    compute_map,
    is_jointly_measurable,
    steering_objective,
    unsharp_f,
    validate_density,
)
from steerkit.qstate import SIGMA, canonical_from_x, x_matrix
from steerkit.steer_functional import (
    AXES_PAIRS,
    AXIS_ANGLES,
    conditional_states,
    objective_batch,
    objective_from_xg,
    sph_to_vec,
)


def random_x_params(rng, bloch_cap=0.9):
    """Rejection-sample a physical X-state with non-pure marginals."""
    while True:
        a3, b3 = rng.uniform(-bloch_cap, bloch_cap, 2)
        c1, c2, c3 = rng.uniform(-1.0, 1.0, 3)
        p = XStateParams(a3, b3, c1, c2, c3)
        if np.linalg.eigvalsh(x_matrix(p))[0] >= 0.0:
            return p


def observable_from_matrices(rho, n, party):
    """(x, g) by the definition: sandwich the conditional states with the
    steered marginal's inverse square root and read off the Pauli parts."""
    plus, _minus = conditional_states(rho, n, party)
    m = np.asarray(getattr(rho, "entries", rho))
    red = m.reshape(2, 2, 2, 2)
    marginal = np.einsum("kikj->ij", red) if party == "A" else np.einsum("ikjk->ij", red)
    evals, evecs = np.linalg.eigh(marginal)
    inv_sqrt = (evecs / np.sqrt(evals)) @ evecs.conj().T
    eff = inv_sqrt @ plus @ inv_sqrt
    x = float(np.trace(eff).real) - 1.0
    g = np.array([float(np.trace(eff @ s).real) for s in SIGMA])
    return x, g


def test_measurement_direction_vector():
    n = MeasurementDirection(math.pi / 2, math.pi / 2).n
    assert np.allclose(n, [0, 1, 0], atol=1e-15)
    assert np.allclose(MeasurementDirection(0.0, 1.3).n, [0, 0, 1], atol=1e-15)


def test_unsharp_f_oracle():
    # x = 0.6, |g| = 0.3: radicands 2.47 and 0.07
    val = unsharp_f(0.6, 0.3)
    assert val == pytest.approx(0.5 * (math.sqrt(2.47) + math.sqrt(0.07)), abs=1e-15)
    assert val == pytest.approx(0.9180992478283152, abs=1e-15)
    assert unsharp_f(0.0, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_unsharp_f_domain():
    with pytest.raises(DomainError):
        unsharp_f(0.5, 0.8)
    # a barely negative radicand counts as zero: F = sqrt(2)/2 from the
    # surviving (1+x)^2 - g^2 term alone
    assert unsharp_f(0.5, math.sqrt(0.25 + 5e-13)) == pytest.approx(math.sqrt(2.0) / 2, abs=1e-6)


def test_compute_map_unbiased_steered_party():
    # b = 0 makes U the correlation matrix itself and V zero, with no
    # special-casing needed in the rationalized form
    p = XStateParams(0.4, 0.0, 0.5, -0.3, 0.2)
    smap = compute_map(canonical_from_x(p), Direction.AtoB)
    assert np.array_equal(smap.U, np.diag([0.5, -0.3, 0.2]))
    assert np.allclose(smap.V, [0, 0, 0.4], atol=1e-15)


def test_compute_map_singular():
    p = XStateParams(0.0, 1.0, 0.0, 0.0, 1.0)
    with pytest.raises(SteeredStateSingular):
        compute_map(canonical_from_x(p), Direction.AtoB)
    # the other direction steers the mixed party and works
    compute_map(canonical_from_x(p), Direction.BtoA)


def test_map_matches_sandwich_route():
    """U n and V . n must reproduce the explicit matrix construction."""
    rng = np.random.default_rng(4)
    for _ in range(20):
        p = random_x_params(rng)
        rho = validate_density(x_matrix(p))
        for direction, party in ((Direction.AtoB, "A"), (Direction.BtoA, "B")):
            smap = compute_map(canonical_from_x(p), direction)
            for _k in range(3):
                nd = MeasurementDirection(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
                x_ref, g_ref = observable_from_matrices(rho, nd.n, party)
                obs = assemblage(smap, nd)
                assert obs.x == pytest.approx(x_ref, abs=1e-10)
                assert np.allclose(obs.g, g_ref, atol=1e-10)


def test_assemblage_within_unit_ball():
    rng = np.random.default_rng(9)
    for _ in range(20):
        p = random_x_params(rng)
        smap = compute_map(canonical_from_x(p), Direction.AtoB)
        nd = MeasurementDirection(rng.uniform(0, math.pi), rng.uniform(0, 2 * math.pi))
        obs = assemblage(smap, nd)
        assert np.linalg.norm(obs.g) <= 1.0 - abs(obs.x) + DEFAULT.assemblage


def test_assemblage_rejects_inconsistent_map():
    p = XStateParams(0.0, 0.0, 0.5, 0.5, 0.5)
    smap = compute_map(canonical_from_x(p), Direction.AtoB)
    bad = dataclasses.replace(smap, U=np.eye(3) * 1.5)
    with pytest.raises(UnphysicalAssemblage):
        assemblage(bad, MeasurementDirection(math.pi / 2, 0.0))


def test_objective_flip_and_swap_symmetry():
    rng = np.random.default_rng(13)
    p = random_x_params(rng)
    smap = compute_map(canonical_from_x(p), Direction.AtoB)
    for _ in range(50):
        a0, a1 = rng.uniform(0, math.pi, 2)
        b0, b1 = rng.uniform(0, 2 * math.pi, 2)
        n0 = MeasurementDirection(a0, b0)
        n1 = MeasurementDirection(a1, b1)
        n0f = MeasurementDirection(math.pi - a0, b0 + math.pi)
        base = steering_objective(smap, n0, n1)
        assert steering_objective(smap, n1, n0) == base
        assert abs(steering_objective(smap, n0f, n1) - base) < 1e-12


def test_jointly_measurable_flags():
    # deep in the unsteerable region every pair is compatible
    p = XStateParams(0.0, 0.0, 0.3, -0.3, 0.3)
    smap = compute_map(canonical_from_x(p), Direction.AtoB)
    axes = [MeasurementDirection(*AXIS_ANGLES[ax]) for ax in ("x", "y", "z")]
    for i in range(3):
        for j in range(i + 1, 3):
            o0 = assemblage(smap, axes[i])
            o1 = assemblage(smap, axes[j])
            assert is_jointly_measurable(o0, o1)
    # a strongly steerable state fails on the optimal axes pair
    p2 = XStateParams(0.0, 0.0, 0.9, -0.9, 0.9)
    smap2 = compute_map(canonical_from_x(p2), Direction.AtoB)
    o0 = assemblage(smap2, axes[0])
    o1 = assemblage(smap2, axes[1])
    assert not is_jointly_measurable(o0, o1)


def test_objective_batch_matches_scalar():
    rng = np.random.default_rng(2)
    p = random_x_params(rng)
    smap = compute_map(canonical_from_x(p), Direction.AtoB)
    alphas = rng.uniform(0, math.pi, (40, 2))
    betas = rng.uniform(0, 2 * math.pi, (40, 2))
    n0 = sph_to_vec(alphas[:, 0], betas[:, 0])
    n1 = sph_to_vec(alphas[:, 1], betas[:, 1])
    vals = objective_batch(smap.U, smap.V, n0, n1)
    for i in range(40):
        ref = steering_objective(
            smap,
            MeasurementDirection(alphas[i, 0], betas[i, 0]),
            MeasurementDirection(alphas[i, 1], betas[i, 1]),
        )
        assert vals[i] == pytest.approx(ref, abs=1e-14)


def test_sentinel_on_sharp_biased_inputs():
    # unreachable from physical maps; exercised with raw values and a tolerance
    # record whose sharpness cut is loose enough to trip the guard
    tol = dataclasses.replace(DEFAULT, sharp=4.0, assemblage=1e-9)
    val = objective_from_xg(9.0, np.array([8.0, 0, 0]), 0.0, np.array([0.1, 0, 0]), tol)
    assert val == SENTINEL
    vals = objective_batch(
        np.eye(3), np.zeros(3),
        np.array([[1.0, 0, 0]]), np.array([[0.0, 1.0, 0]]),
    )
    assert vals.shape == (1,)


def test_axes_pairs_table():
    assert AXES_PAIRS == (("x", "y"), ("x", "z"), ("y", "z"))
    n_x = sph_to_vec(*AXIS_ANGLES["x"])
    n_y = sph_to_vec(*AXIS_ANGLES["y"])
    n_z = sph_to_vec(*AXIS_ANGLES["z"])
    assert np.allclose(n_x, [1, 0, 0], atol=1e-15)
    assert np.allclose(n_y, [0, 1, 0], atol=1e-15)
    assert np.allclose(n_z, [0, 0, 1], atol=1e-15)
