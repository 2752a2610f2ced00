import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nsipm.barriers import ConeSpec, homogenize
from nsipm.errors import ConfigurationError, DegeneratePoint
from nsipm.hsd import (
    ConicProblem,
    HsdPoint,
    build_g,
    dual_interior_certified,
    in_neighborhood,
    mu,
    proximity,
    psi,
    residual,
)
from nsipm.verify import point_in_neighborhood, random_problem


def test_build_g_layout(small_lp):
    G = build_g(small_lp)
    assert G.shape == (4, 4)
    np.testing.assert_array_equal(G[0], [0.0, 5.0, -3.0, -12.0])
    np.testing.assert_array_equal(G + G.T, np.zeros((4, 4)))


def test_build_g_without_equalities():
    c = np.array([1.0, -2.0])
    p = ConicProblem(np.zeros((0, 2)), np.zeros(0), c, ConeSpec.nonneg(2))
    G = build_g(p)
    expected = np.zeros((3, 3))
    expected[:2, 2] = c
    expected[2, :2] = -c
    np.testing.assert_array_equal(G, expected)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_build_g_is_skew(seed):
    p = random_problem(np.random.default_rng(seed))
    G = build_g(p)
    assert np.array_equal(G.T, -G)


def test_problem_validation():
    cone = ConeSpec.nonneg(2)
    with pytest.raises(ConfigurationError):
        ConicProblem(np.ones((1, 2)), [1.0], [1.0, 1.0], ConeSpec.nonneg(1))
    with pytest.raises(ConfigurationError):
        ConicProblem(np.ones((2, 2)), [1.0, 2.0], [1.0, 1.0], cone)
    with pytest.raises(ConfigurationError):
        ConicProblem(np.ones((3, 2)), [1.0, 2.0, 3.0], [1.0, 1.0], cone)


def test_residual_zero_on_feasible_point():
    # x = (3, 1), tau = 1 satisfies 5*3 - 3*1 = 12; pick y and set s, kappa to match
    A = np.array([[5.0, -3.0]])
    b, c = np.array([12.0]), np.array([2.0, 3.0])
    p = ConicProblem(A, b, c, ConeSpec.nonneg(2))
    x, y = np.array([3.0, 1.0]), np.array([0.1])
    s = c - A.T @ y
    kappa = float(b @ y - c @ x)
    z = HsdPoint(np.append(x, 1.0), y, np.append(s, kappa))
    np.testing.assert_allclose(residual(build_g(p), z), 0.0, atol=1e-14)


def test_residual_of_printed_point(lp_setup, predictor_point):
    _, G, _ = lp_setup
    r = residual(G, predictor_point)
    x1, x2, tau, y, s1, s2, kappa = 0.9310, 0.6995, 0.8511, 0.0224, 0.8246, 1.0891, 0.9023
    expected = [5 * x1 - 3 * x2 - 12 * tau,
                -5 * y + 2 * tau - s1,
                3 * y + 3 * tau - s2,
                12 * y - 2 * x1 - 3 * x2 - kappa]
    np.testing.assert_allclose(r, expected, rtol=1e-14)
    assert r.size == 4 and np.linalg.norm(r) > 1


def test_residual_is_linear(lp_setup, predictor_point):
    _, G, _ = lp_setup
    np.testing.assert_allclose(residual(G, predictor_point.scaled(2.5)),
                               2.5 * residual(G, predictor_point), rtol=1e-14)


def test_mu_values(predictor_point, corrector_point):
    assert mu(HsdPoint(np.ones(3), np.zeros(1), np.ones(3)), 3) == 1.0
    assert mu(predictor_point, 3) == pytest.approx(0.7658251933333333, rel=1e-14)
    assert mu(predictor_point, 3) == pytest.approx(0.7658, abs=1e-4)
    assert mu(corrector_point, 3) == pytest.approx(0.9479990133333333, rel=1e-14)


def test_psi_vanishes_on_central_point():
    Fbar = homogenize(ConeSpec((("nonneg", 2), ("exp", 3))).barrier())
    xbar = Fbar.anchor() * 1.7
    sbar = -0.3 * Fbar.gradient(xbar)
    np.testing.assert_allclose(psi(xbar, sbar, 0.3, Fbar), 0.0, atol=1e-15)


def test_psi_orthogonal_to_xbar():
    rng = np.random.default_rng(4)
    for _ in range(50):
        p = random_problem(rng, mixed=True)
        Fbar = homogenize(p.barrier())
        xbar = Fbar.sample_interior(rng)
        sbar = -Fbar.gradient(Fbar.sample_interior(rng))
        z = HsdPoint(xbar, np.zeros(p.m), sbar)
        t = mu(z, Fbar.nu)
        assert abs(psi(xbar, sbar, t, Fbar) @ xbar) <= 1e-10 * Fbar.nu * t


def test_printed_points_in_neighborhoods(lp_setup, predictor_point, corrector_point):
    _, _, Fbar = lp_setup
    m_ = mu(predictor_point, 3)
    from nsipm.barriers import LocalMetric
    dual = LocalMetric(Fbar, predictor_point.xbar).dual_norm(
        psi(predictor_point.xbar, predictor_point.sbar, m_, Fbar))
    assert 0 < dual <= 0.15 * m_
    assert proximity(predictor_point, Fbar) <= 0.15
    assert proximity(corrector_point, Fbar) <= 0.30
    assert in_neighborhood(predictor_point, 0.15, Fbar)


def test_central_point_proximity_zero():
    Fbar = homogenize(ConeSpec.nonneg(2).barrier())
    z = HsdPoint(np.ones(3), np.zeros(1), np.ones(3))
    assert proximity(z, Fbar) == 0.0
    assert in_neighborhood(z, 0.0, Fbar)


def test_boundary_and_degenerate_points():
    Fbar = homogenize(ConeSpec.nonneg(2).barrier())
    boundary = HsdPoint(np.array([1.0, 0.0, 1.0]), np.zeros(1), np.ones(3))
    assert not in_neighborhood(boundary, 0.5, Fbar)
    assert proximity(boundary, Fbar) == math.inf
    degenerate = HsdPoint(np.ones(3), np.zeros(1), -np.ones(3))
    with pytest.raises(DegeneratePoint):
        proximity(degenerate, Fbar)
    assert not in_neighborhood(degenerate, 0.5, Fbar)


def test_dual_interior_certificate_agrees_with_oracle():
    rng = np.random.default_rng(9)
    for _ in range(200):
        p = random_problem(rng)
        Fbar = homogenize(p.barrier())
        z = point_in_neighborhood(Fbar, p.m, 0.9, rng, low=0.0)
        t = mu(z, Fbar.nu)
        assert dual_interior_certified(z.xbar, z.sbar, t, Fbar)
        assert Fbar.dual_interior(z.sbar)


def test_sampled_points_hit_target_proximity():
    rng = np.random.default_rng(12)
    for _ in range(100):
        p = random_problem(rng)
        Fbar = homogenize(p.barrier())
        z = point_in_neighborhood(Fbar, p.m, 0.2, rng)
        assert 0.1 - 1e-12 <= proximity(z, Fbar) <= 0.2 + 1e-12
