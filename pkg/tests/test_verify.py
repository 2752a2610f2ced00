import json
import math

import numpy as np
import pytest

from nsipm.barriers import exp_cone_barrier, homogenize, log_barrier_orthant
from nsipm.hsd import build_g, mu
from nsipm.steps import apply_step, corrector_direction, predictor_direction
from nsipm.verify import (
    FIXTURE,
    CheckReport,
    check_conjugacy,
    check_corrector_step_bounds,
    check_damped_newton,
    check_dual_norm_change,
    check_finite_differences,
    check_gradient_bound,
    check_hessian_operator_bounds,
    check_log_homogeneity,
    check_predictor_step_bounds,
    check_preset_bounds,
    check_self_concordance_ratio,
    corrector_proximity_bound,
    damped_newton_bound,
    predictor_proximity_bound,
    refuted_bound,
    refuted_inequality_terms,
    reproduce_counterexamples,
    run_suite,
    sample_ball_pairs,
    sample_hsd_instances,
    sample_newton_instances,
)

E1 = np.array([1.0, 0.0])


def test_report_slack_and_strict():
    rep = CheckReport("demo", "x")
    assert rep.add(1.0 + 1e-10, 1.0)
    assert not rep.add(1.1, 1.0)
    assert rep.failures == 1 and not rep.passed
    assert rep.lhs == 1.1
    strict = CheckReport("demo", "x", strict=True)
    assert not strict.add(1.0, 1.0)
    json.loads(rep.to_json())


def test_self_concordance_ratio_cases():
    F = log_barrier_orthant(2)
    x = np.ones(2)
    rep = check_self_concordance_ratio(F, [(x, x.copy(), E1)])
    assert rep.passed and rep.lhs == pytest.approx(1.0) and rep.rhs == pytest.approx(1.0)
    # ||e1||_u / ||e1||_x = 1/1.5 inside [1 - 0.5, 1/(1 - 0.5)]
    rep = check_self_concordance_ratio(F, [(x, np.array([1.5, 1.0]), E1)])
    assert rep.passed and rep.samples == 2
    from nsipm.barriers import LocalMetric
    assert LocalMetric(F, [1.5, 1.0]).norm(E1) == pytest.approx(2.0 / 3.0)


def test_self_concordance_ratio_sweep_exp():
    F = exp_cone_barrier()
    rng = np.random.default_rng(0)
    assert check_self_concordance_ratio(F, sample_ball_pairs(F, 1000, rng)).passed


def test_ratio_check_detects_points_outside_the_ball():
    F = log_barrier_orthant(1)
    # r = 3 > 1: lower bound 1 - r < 0 holds but upper bound 1/(1-r) < 0 fails
    rep = check_self_concordance_ratio(F, [(np.ones(1), np.array([4.0]), np.ones(1))])
    assert not rep.passed


def test_hessian_operator_cases():
    F = log_barrier_orthant(2)
    x = np.ones(2)
    assert check_hessian_operator_bounds(F, [(x, x.copy(), E1)]).passed
    from nsipm.barriers import LocalMetric
    mx = LocalMetric(F, x)
    Hu = F.hessian([1.25, 1.0])
    assert mx.operator_norm(mx.solve(Hu)) == pytest.approx(1.0)
    assert mx.operator_norm(np.eye(2) - mx.solve(Hu)) == pytest.approx(0.36)
    rep = check_hessian_operator_bounds(F, [(x, np.array([1.25, 1.0]), E1)])
    assert rep.passed
    assert (1 - 0.25) ** -2 == pytest.approx(16 / 9)


def test_damped_newton_bound_special_cases():
    lam = 0.3
    assert damped_newton_bound(1.0, lam) == pytest.approx((lam / (1 - lam)) ** 2)
    assert damped_newton_bound(0.0, lam) == pytest.approx(lam)


def test_damped_newton_sweep_orthant():
    F = log_barrier_orthant(3)
    rng = np.random.default_rng(1)
    rep = check_damped_newton(F, sample_newton_instances(F, 300, rng), alphas=(0.5,))
    assert rep.passed and rep.samples > 0


def test_damped_newton_alpha_zero_is_tight():
    F = log_barrier_orthant(3)
    rng = np.random.default_rng(2)
    rep = check_damped_newton(F, sample_newton_instances(F, 20, rng), alphas=(0.0,))
    assert rep.passed
    assert rep.lhs == pytest.approx(rep.rhs, rel=1e-10)


def test_dual_norm_change_cases():
    F = log_barrier_orthant(2)
    x = np.ones(2)
    rep = check_dual_norm_change(F, [(x, np.array([1.5, 1.0]), E1)])
    assert rep.passed
    assert rep.lhs == pytest.approx(1.5) and rep.rhs == pytest.approx(2.0)
    rep = check_dual_norm_change(F, [(x, x.copy(), E1)])
    assert rep.lhs == pytest.approx(1.0) and rep.passed


def test_gradient_bound_cases():
    F = log_barrier_orthant(1)
    rep = check_gradient_bound(F, [(np.ones(1), np.array([1.5]), np.ones(1))])
    assert rep.lhs == pytest.approx(1 / 3) and rep.rhs == pytest.approx(1.0)
    rep = check_gradient_bound(F, [(np.ones(1), np.ones(1), np.ones(1))])
    assert rep.lhs == 0.0 and rep.passed
    E = exp_cone_barrier()
    assert check_gradient_bound(E, sample_ball_pairs(E, 300, np.random.default_rng(3))).passed


def test_log_homogeneity_and_finite_differences():
    rng = np.random.default_rng(4)
    E = exp_cone_barrier()
    pts = [E.sample_interior(rng) for _ in range(100)]
    assert check_log_homogeneity(E, pts, rng).passed
    assert check_finite_differences(E, pts).passed


def test_conjugacy_orthant_closed_form():
    F = log_barrier_orthant(2)
    x0 = np.array([0.5, 4.0])
    rep = check_conjugacy(F, [(x0, np.array([1.0, -2.0]))])
    assert rep.passed


def test_conjugacy_exp():
    E = exp_cone_barrier()
    rng = np.random.default_rng(5)
    samples = [(E.sample_interior(rng), rng.normal(size=3)) for _ in range(50)]
    assert check_conjugacy(E, samples).passed


def test_preset_bounds_values():
    assert predictor_proximity_bound(0.020, 0.10) == pytest.approx(0.19664, abs=1e-5)
    assert predictor_proximity_bound(0.025, 0.1225) == pytest.approx(0.24592, abs=1e-5)
    assert corrector_proximity_bound(0.20, 1.0) == pytest.approx(0.09264, abs=1e-5)
    assert corrector_proximity_bound(0.25, 1.0) == pytest.approx(0.16032, abs=1e-5)
    assert all(r.passed for r in check_preset_bounds())


def test_corrector_bound_at_zero_step():
    # alpha_c = 0 leaves the point unchanged; the bound reduces to 4 theta / 2,
    # which is valid (proximity stays theta) but not tight
    assert corrector_proximity_bound(0.2, 0.0) == pytest.approx(0.4)


def test_predictor_step_bounds_zero_step():
    rng = np.random.default_rng(6)
    inst = sample_hsd_instances(20, 0.10, rng)
    reports = check_predictor_step_bounds(inst, 0.10, alpha_fractions=(0.0,), presets=())
    assert all(r.passed for r in reports)
    gap = [r for r in reports if r.check == "predictor_gap_change"][0]
    assert gap.samples == 60


def test_corrector_zero_step_keeps_mu():
    rng = np.random.default_rng(7)
    for p, G, Fbar, z in sample_hsd_instances(20, 0.25, rng):
        zp = apply_step(z, corrector_direction(G, z, Fbar), 0.0)
        assert mu(zp, Fbar.nu) == mu(z, Fbar.nu)
    reports = check_corrector_step_bounds(sample_hsd_instances(50, 0.30, rng), 0.30)
    assert all(r.passed for r in reports)


def test_refuted_bound_formula():
    assert refuted_bound(2.0, 0.5) == pytest.approx(2.0)


def test_counterexample_values():
    p = FIXTURE.problem()
    Fbar = homogenize(p.barrier())
    G = build_g(p)
    zp = FIXTURE.point(FIXTURE.predictor_point)
    lhs, rhs, q, _ = refuted_inequality_terms(G, zp, predictor_direction(G, zp, Fbar),
                                              FIXTURE.alpha_p, Fbar)
    # frozen from a 30-digit mpmath solve of the unscaled Newton system
    assert q == pytest.approx(0.07587107791757326, rel=1e-9)
    assert lhs == pytest.approx(0.005433266518573155, rel=1e-9)
    assert rhs == pytest.approx(0.004893969189055349, rel=1e-9)
    zc = FIXTURE.point(FIXTURE.corrector_point)
    lhs, rhs, q, _ = refuted_inequality_terms(G, zc, corrector_direction(G, zc, Fbar),
                                              FIXTURE.alpha_c, Fbar)
    assert q == pytest.approx(0.0015683454209430934, rel=1e-8)
    assert lhs == pytest.approx(0.0014813880890153273, rel=1e-8)
    assert rhs == pytest.approx(2.339131521648157e-06, rel=1e-7)


def test_reproduce_counterexamples_passes_and_is_stable():
    a = reproduce_counterexamples()
    b = reproduce_counterexamples()
    assert all(r.passed for r in a)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]
    assert sum(r.check == "violation_reproduced" for r in a) == 2


def test_run_suite_deterministic():
    a = [r.to_json() for r in run_suite("corrector", samples=5, seed=3)]
    b = [r.to_json() for r in run_suite("corrector", samples=5, seed=3)]
    assert a == b
    with pytest.raises(ValueError):
        run_suite("nope")


def test_run_suite_all_smoke():
    reports = run_suite("all", samples=10, seed=0)
    failing = [r.line() for r in reports if not r.passed]
    assert not failing, failing
    assert math.isfinite(sum(r.lhs for r in reports if math.isfinite(r.lhs)))
