import itertools
import math
import time

import numpy as np
import pytest
from hypothesis import given, strategies as st

from noisy_support.bodies import Ball
from noisy_support.endpoint import bias_bn
from noisy_support.estimator import (EstimatorConfig, GaussianNoise, UniformBallNoise,
                                     assemble_estimator, build_estimator, choose_M,
                                     choose_M_uniform, direction_budget, estimate_support_value,
                                     estimator_support, evaluate_trial, hausdorff_to_body,
                                     membership, read_cloud, read_estimator, write_cloud,
                                     write_estimator)
from noisy_support.sphere import sample_sphere, sphere_net


def polygon_vertices(A, b):
    """Vertices of a bounded 2D polygon by pairwise intersection."""
    V = []
    for i, j in itertools.combinations(range(len(b)), 2):
        M = A[[i, j]]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, b[[i, j]])
        if np.all(A @ x <= b + 1e-9):
            V.append(x)
    return np.array(V)


# --- direction budget --------------------------------------------------------------------


def test_choose_M_examples():
    assert choose_M(2981, 1.0, 2) == 135
    assert direction_budget(4.0, 3) == 2215
    assert choose_M(2981, 1.0, 3) == 2215


def test_choose_M_clamp_and_errors():
    assert choose_M(3, 1e-6, 2) == 3
    with pytest.raises(ValueError, match="n too small"):
        choose_M(10, 0.01, 3)
    with pytest.raises(ValueError):
        choose_M(100, 1.0, 1)


def test_choose_M_scaling_in_ln_n():
    for d in (2, 3):
        ratios = [choose_M(n, 1.0, d) / (2 * math.log(n)) ** ((d - 1) / 2)
                  for n in np.logspace(3, 8, 11).astype(int)]
        assert max(ratios) / min(ratios) <= 2.0


def test_choose_M_uniform_grows_polynomially():
    assert choose_M_uniform(1000, 2) == 244
    assert choose_M_uniform(10 ** 6, 2) > 7 * choose_M_uniform(1000, 2)


# --- directional estimates -----------------------------------------------------------------


def test_support_value_examples():
    cloud = np.array([[0.0, 0.0], [2.0, 0.0]])
    assert estimate_support_value([1, 0], cloud, GaussianNoise(1.0)) == pytest.approx(
        2 - math.sqrt(2 * math.log(2)))
    assert estimate_support_value([1, 0], cloud, UniformBallNoise(0.5)) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        estimate_support_value([1, 0], np.zeros((0, 2)), GaussianNoise(1.0))


def test_support_value_monte_carlo(rng):
    G, noise, n = Ball([0, 0], 1), GaussianNoise(0.01), 10 ** 5
    vals = [estimate_support_value([1, 0], G.sample_uniform(rng, n) + noise.sample(rng, n, 2), noise)
            for _ in range(100)]
    assert 0.8 <= np.mean(vals) <= 1.1


def test_noise_models_validate():
    with pytest.raises(ValueError):
        GaussianNoise(0.0)
    with pytest.raises(ValueError):
        UniformBallNoise(-1.0)
    assert UniformBallNoise(0.3).bias(10) == 0.3


def test_uniform_ball_noise_inside_ball(rng):
    eps = UniformBallNoise(0.3).sample(rng, 10_000, 3)
    assert np.all(np.linalg.norm(eps, axis=1) <= 0.3)


# --- building -------------------------------------------------------------------------------


def test_slab_estimator(rng):
    cloud = rng.uniform([-1, -50], [1, 50], size=(500, 2))
    dirs = np.array([[1.0, 0.0], [-1.0, 0.0]] * 3)
    est = build_estimator(cloud, EstimatorConfig(2, None, M=6), rng, directions=dirs)
    hi, lo = cloud[:, 0].max(), cloud[:, 0].min()
    X = rng.uniform(-2, 2, size=(1000, 2))
    inside_slab = (X[:, 0] <= hi) & (X[:, 0] >= lo)
    near = np.linalg.norm(X - est.mu_hat, axis=1) <= est.trunc_radius
    np.testing.assert_array_equal(est.membership(X), inside_slab & near)


def test_infeasible_offsets_give_point_estimator():
    est = assemble_estimator([[1.0], [-1.0]], [-1.0, -2.0], [0.25], n=100)
    assert est.empty
    assert est.membership([0.25]) and not est.membership([0.26])
    assert estimator_support(est, np.array([1.0])) == 0.25
    assert estimator_support(est, np.array([-1.0])) == -0.25


def test_build_ball_sigma_01():
    rng = np.random.default_rng(7)
    G, noise, n = Ball([0, 0], 1), GaussianNoise(0.01), 10 ** 5
    cloud = G.sample_uniform(rng, n) + noise.sample(rng, n, 2)
    est = build_estimator(cloud, EstimatorConfig(2, noise), rng)
    assert not est.empty
    assert np.linalg.norm(est.mu_hat) <= 0.05
    assert est.M == choose_M(n, 0.01, 2)
    assert est.trunc_radius == pytest.approx(math.log(n))


def test_build_validation(rng):
    with pytest.raises(ValueError):
        EstimatorConfig(2, GaussianNoise(1.0), M=0)
    with pytest.raises(ValueError):
        build_estimator(np.zeros((10, 3)), EstimatorConfig(2, GaussianNoise(1.0)), rng)
    with pytest.raises(ValueError):
        build_estimator(np.zeros((10, 2)), EstimatorConfig(2, GaussianNoise(1.0), n=11), rng)


# --- membership -----------------------------------------------------------------------------------


@pytest.fixture
def fitted(rng):
    G, noise, n = Ball([0, 0], 1), GaussianNoise(0.01), 20_000
    cloud = G.sample_uniform(rng, n) + noise.sample(rng, n, 2)
    return cloud, build_estimator(cloud, EstimatorConfig(2, noise, M=50), rng)


def test_mu_hat_is_member(fitted):
    _, est = fitted
    assert est.membership(est.mu_hat)


def test_far_point_not_member(fitted):
    _, est = fitted
    far = est.mu_hat + np.array([est.trunc_radius + 1e-6, 0.0])
    assert not est.membership(far)


def test_batch_membership_matches_loop(fitted, rng):
    _, est = fitted
    X = rng.uniform(-1.5, 1.5, size=(300, 2))
    np.testing.assert_array_equal(membership(est, X), [membership(est, x) for x in X])


def test_membership_cost_linear_in_M(rng):
    X = rng.standard_normal((4000, 3))
    times = []
    for M in (100, 1000, 10000):
        U = sample_sphere(rng, 3, M)
        est = assemble_estimator(U, np.full(M, 1.0), np.zeros(3), n=100)
        best = np.inf
        for _ in range(5):
            t0 = time.perf_counter()
            est.membership(X)
            best = min(best, time.perf_counter() - t0)
        times.append(best)
    slope = np.polyfit(np.log([100, 1000, 10000]), np.log(times), 1)[0]
    assert 0.5 <= slope <= 1.3


# --- support of the estimate -------------------------------------------------------------------------


def test_slab_support_with_huge_ball():
    est = assemble_estimator([[1.0, 0.0], [-1.0, 0.0]], [1.0, 1.0], [0.0, 0.0], n=10 ** 40)
    assert estimator_support(est, np.array([1.0, 0.0])) == pytest.approx(1.0, abs=1e-8)


def test_support_matches_polygon_vertices():
    rng = np.random.default_rng(31)
    for _ in range(200):
        M = int(rng.integers(5, 30))
        U = sample_sphere(rng, 2, M)
        U = np.vstack([U, [[1, 0], [-1, 0], [0, 1], [0, -1]]])
        off = rng.uniform(0.3, 1.5, U.shape[0])
        est = assemble_estimator(U, off, np.zeros(2), n=10 ** 6)  # radius 13.8, never binds
        V = polygon_vertices(U, off)
        u = sample_sphere(rng, 2)
        assert estimator_support(est, u) == pytest.approx((V @ u).max(), abs=1e-7)


def test_support_never_exceeds_directional_estimate(fitted):
    _, est = fitted
    for a, o in zip(est.normals, est.offsets):
        assert estimator_support(est, a) <= o + 1e-8


@given(st.floats(-3, 3), st.floats(-3, 3), st.integers(0, 1000))
def test_translation_equivariance(vx, vy, seed):
    rng = np.random.default_rng(seed)
    cloud = rng.uniform(-1, 1, size=(200, 2))
    dirs = sample_sphere(rng, 2, 12)
    cfg = EstimatorConfig(2, GaussianNoise(0.01), M=12)
    v = np.array([vx, vy])
    a = build_estimator(cloud, cfg, rng, directions=dirs)
    b = build_estimator(cloud + v, cfg, rng, directions=dirs)
    np.testing.assert_allclose(b.offsets, a.offsets + dirs @ v, atol=1e-12)
    np.testing.assert_allclose(b.mu_hat, a.mu_hat + v, atol=1e-12)
    X = rng.uniform(-1.5, 1.5, size=(50, 2))
    # points well away from the boundary are classified identically
    margin = np.min(np.abs(X @ dirs.T - a.offsets), axis=1) > 1e-9
    np.testing.assert_array_equal(a.membership(X)[margin], b.membership(X + v)[margin])


# --- trials --------------------------------------------------------------------------------------


def test_noiseless_trial_is_accurate():
    net = sphere_net(2, 0.01)
    r = evaluate_trial(Ball([0, 0], 1), EstimatorConfig(2, None, M=200), net,
                       np.random.default_rng(3), n=10 ** 4)
    assert not r.empty
    assert r.dH_upper < 0.1
    assert r.dH_lower <= r.dH_upper


def test_trial_is_deterministic():
    net = sphere_net(2, 0.05)
    cfg = EstimatorConfig(2, GaussianNoise(0.01))
    a = evaluate_trial(Ball([0, 0], 1), cfg, net, np.random.default_rng(11), n=2000)
    b = evaluate_trial(Ball([0, 0], 1), cfg, net, np.random.default_rng(11), n=2000)
    assert a == b


def test_empty_case_hausdorff_contract():
    G = Ball([0, 0], 1)
    net = sphere_net(2, 0.01)
    est = assemble_estimator([[1.0, 0.0], [-1.0, 0.0]], [-1.0, -2.0], [0.2, 0.1], n=100)
    br, R = hausdorff_to_body(est, G, net)
    U = net.directions
    assert br.lower == pytest.approx(np.max(np.abs(U @ est.mu_hat - G.support(U))), abs=1e-12)
    assert br.upper - br.lower == pytest.approx(2 * R * net.resolution)


def test_trial_requires_n():
    with pytest.raises(ValueError):
        evaluate_trial(Ball([0, 0], 1), EstimatorConfig(2, GaussianNoise(0.01)),
                       sphere_net(2, 0.1), np.random.default_rng(0))


# --- files ------------------------------------------------------------------------------------------


def test_cloud_round_trip(tmp_path, rng):
    Y = rng.standard_normal((50, 3)) * 1e-3
    write_cloud(tmp_path / "c.csv", Y)
    assert (tmp_path / "c.csv").read_text().splitlines()[0] == "x1,x2,x3"
    np.testing.assert_array_equal(read_cloud(tmp_path / "c.csv"), Y)


def test_estimator_round_trip(tmp_path, fitted, rng):
    _, est = fitted
    write_estimator(tmp_path / "e.csv", est)
    lines = (tmp_path / "e.csv").read_text().splitlines()
    assert lines[0] == "n1,n2,offset"
    assert lines[-2].startswith("muhat,") and lines[-1].startswith("radius,")
    again = read_estimator(tmp_path / "e.csv")
    np.testing.assert_array_equal(again.normals, est.normals)
    np.testing.assert_array_equal(again.offsets, est.offsets)
    assert again.trunc_radius == est.trunc_radius and again.empty == est.empty
    X = rng.uniform(-1.5, 1.5, size=(200, 2))
    np.testing.assert_array_equal(again.membership(X), est.membership(X))


def test_bad_estimator_file(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("n1,n2,offset\n1,0,1\n")
    with pytest.raises(ValueError):
        read_estimator(p)
