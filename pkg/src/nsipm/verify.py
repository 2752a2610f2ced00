"""Numerical checks of the self-concordance calculus and the step analysis.

Each ``check_*`` function evaluates one family of inequalities over a list
of samples and returns a :class:`CheckReport` holding the worst sample.
Sample generators (``sample_*``) are seeded; :func:`run_suite` ties them
together for the CLI.
"""

import json
import math
import zlib
from dataclasses import asdict, dataclass

import numpy as np

from .barriers import (
    BarrierOracle,
    ConeSpec,
    LocalMetric,
    conjugate_gradient_inverse,
    exp_cone_barrier,
    homogenize,
    log_barrier_orthant,
    product_barrier,
)
from .errors import NoConvergence
from .hsd import ConicProblem, HsdPoint, build_g, mu, proximity, psi, residual
from .steps import (
    apply_step,
    corrector_direction,
    fixed_predictor_alpha,
    predictor_direction,
    step_constants,
)

SQRT2 = math.sqrt(2.0)


@dataclass
class CheckReport:
    """Worst-case summary of one inequality family.

    ``passed`` holds iff every sample satisfied ``lhs <= rhs + slack``
    (``lhs < rhs`` for strict checks); ``lhs``/``rhs``/``slack`` are taken
    from the sample with the largest ``lhs - rhs - slack``.
    """

    check: str
    instance: str
    lhs: float = -math.inf
    rhs: float = math.inf
    slack: float = 0.0
    passed: bool = True
    samples: int = 0
    failures: int = 0
    strict: bool = False

    def add(self, lhs, rhs, slack=None):
        lhs, rhs = float(lhs), float(rhs)
        if slack is None:
            slack = 0.0 if self.strict else 1e-9 * max(1.0, abs(rhs))
        ok = lhs < rhs if self.strict else lhs <= rhs + slack
        self.samples += 1
        if not ok:
            self.failures += 1
            self.passed = False
        excess = lhs - rhs - slack
        if self.samples == 1 or excess > self.lhs - self.rhs - self.slack or math.isnan(excess):
            self.lhs, self.rhs, self.slack = lhs, rhs, float(slack)
        return ok

    def fail(self, reason=""):
        """Record a sample whose inequality could not be evaluated."""
        self.samples += 1
        self.failures += 1
        self.passed = False
        if reason:
            self.instance = f"{self.instance} [{reason}]"

    @property
    def margin(self):
        return self.rhs - self.lhs

    def to_json(self):
        d = asdict(self)
        return json.dumps(d, sort_keys=True)

    def line(self):
        tag = "PASS" if self.passed else "FAIL"
        return (f"{tag} {self.check} [{self.instance}] lhs={self.lhs:.6g} rhs={self.rhs:.6g} "
                f"samples={self.samples} failures={self.failures}")


def _rng(seed, name):
    return np.random.default_rng([int(seed), zlib.crc32(name.encode())])


def shipped_barriers():
    """Barriers covered by the sweeps, keyed by a short label."""
    return {
        "orthant3": log_barrier_orthant(3),
        "exp": exp_cone_barrier(),
        "orthant2xexp": product_barrier([log_barrier_orthant(2), exp_cone_barrier()]),
    }


# ---------------------------------------------------------------------------
# bounds

def damped_newton_bound(alpha, lam):
    """``(a l / (1 - a l))^2 + (1 - a) l / (1 - a l)`` for ``a l < 1``."""
    al = alpha * lam
    return (al / (1.0 - al)) ** 2 + (1.0 - alpha) * lam / (1.0 - al)


def predictor_proximity_bound(cp, eta):
    """Upper bound on ``mu(z+)^-1 ||psi(z+)||*_{xbar+}`` after a predictor
    step with ``cp = alpha_p kappa_x < 1`` from ``N(eta)``."""
    first = cp / (1.0 - cp) ** 2
    num = 2.0 * eta * (SQRT2 + cp) + 4.0 * (1.0 + SQRT2) * cp
    den = (1.0 - cp) * (SQRT2 - cp) * (2.0 - cp * eta)
    return first + num / den


def corrector_proximity_bound(theta, alpha_c):
    """Upper bound on the proximity after a corrector step from ``N(theta)``."""
    at = alpha_c * theta
    inner = 2.0 * (at / (1.0 - at)) ** 2 + 4.0 * (1.0 - alpha_c) * theta / (1.0 - at) \
        + SQRT2 * alpha_c * theta ** 2
    return inner / (2.0 - alpha_c * theta ** 2)


def refuted_bound(mu_plus, q):
    """``mu+ q^2 / (1 - q)^2``: the step bound the counterexamples refute."""
    return mu_plus * q * q / (1.0 - q) ** 2


# ---------------------------------------------------------------------------
# sample generators

def sample_ball_pairs(F: BarrierOracle, count, rng, radius=0.9):
    """``(x, u, v)`` with ``||u - x||_x`` uniform in ``[0, radius)``."""
    out = []
    for _ in range(count):
        x = F.sample_interior(rng)
        metric = LocalMetric(F, x)
        d = rng.normal(size=F.dim)
        r = radius * rng.uniform()
        u = x + r * d / metric.norm(d)
        v = rng.normal(size=F.dim)
        out.append((x, u, v))
    return out


def sample_newton_instances(F: BarrierOracle, count, rng, max_decrement=1.5):
    """``(c, x)`` such that ``f(v) = c^T v + F(v)`` has Newton decrement
    uniform in ``(0, max_decrement)`` at ``x``."""
    out = []
    for _ in range(count):
        x = F.sample_interior(rng)
        g, H = F.derivatives(x)
        metric = LocalMetric(F, x, hessian=H)
        d = rng.normal(size=F.dim)
        d *= max_decrement * rng.uniform(0.01, 1.0) / metric.norm(d)
        out.append((-g - H @ d, x))
    return out


def random_cone(n, rng, mixed=True):
    blocks = []
    left = n
    while left:
        if mixed and left >= 3 and rng.uniform() < 0.5:
            blocks.append(("exp", 3))
            left -= 3
        else:
            k = int(rng.integers(1, left + 1))
            blocks.append(("nonneg", k))
            left -= k
    return ConeSpec(tuple(blocks))


def random_problem(rng, n_max=8, m_max=4, mixed=True, n_min=1):
    n = int(rng.integers(n_min, n_max + 1))
    m = int(rng.integers(0, min(m_max, n) + 1))
    A = rng.normal(size=(m, n))
    return ConicProblem(A, rng.normal(size=m), rng.normal(size=n), random_cone(n, rng, mixed))


def point_in_neighborhood(Fbar: BarrierOracle, m, theta, rng, low=0.5):
    """Random ``z`` with proximity uniform in ``[low theta, theta]``.

    ``sbar = mu (-gbar(xbar)) + p`` where ``p`` is a Hessian-scaled Gaussian
    with ``p^T xbar = 0``, so ``mu(z)`` is exactly the chosen gap and
    ``psi = p``.
    """
    xbar = Fbar.sample_interior(rng)
    g, H = Fbar.derivatives(xbar)
    metric = LocalMetric(Fbar, xbar, hessian=H)
    gap = math.exp(rng.normal(0.0, 1.0))
    p = metric.factor @ rng.normal(size=Fbar.dim)
    p -= (p @ xbar) / Fbar.nu * (H @ xbar)
    target = theta * rng.uniform(low, 1.0)
    norm = metric.dual_norm(p)
    p = p * (target * gap / norm) if norm > 0 else p
    y = rng.normal(size=m)
    return HsdPoint(xbar, y, -gap * g + p)


def sample_hsd_instances(count, theta, rng, n_max=8, m_max=4, mixed=True):
    """``(problem, G, Fbar, z)`` tuples with ``z`` in ``N(theta)``."""
    out = []
    for _ in range(count):
        p = random_problem(rng, n_max, m_max, mixed)
        Fbar = homogenize(p.barrier())
        out.append((p, build_g(p), Fbar, point_in_neighborhood(Fbar, p.m, theta, rng)))
    return out


# ---------------------------------------------------------------------------
# self-concordance calculus

def check_self_concordance_ratio(F: BarrierOracle, samples, instance=None):
    """``1 - r <= ||v||_u / ||v||_x <= 1/(1 - r)`` with ``r = ||u - x||_x``."""
    rep = CheckReport("self_concordance_ratio", instance or repr(F))
    for x, u, v in samples:
        mx = LocalMetric(F, x)
        r = mx.norm(u - x)
        ratio = LocalMetric(F, u).norm(v) / mx.norm(v)
        rep.add(1.0 - r, ratio)
        rep.add(ratio, 1.0 / (1.0 - r))
    return rep


def check_hessian_operator_bounds(F: BarrierOracle, samples, instance=None):
    """``||H(x)^-1 H(u)||_x`` and the reverse product are at most
    ``(1 - r)^-2``; the same operators minus identity are at most
    ``(1 - r)^-2 - 1``."""
    rep = CheckReport("hessian_operator_bounds", instance or repr(F))
    for sample in samples:
        x, u = sample[0], sample[1]
        mx = LocalMetric(F, x)
        mu_ = LocalMetric(F, u)
        r = mx.norm(u - x)
        bound = (1.0 - r) ** -2
        forward = mx.solve(mu_.hessian)
        backward = mu_.solve(mx.hessian)
        eye = np.eye(F.dim)
        rep.add(mx.operator_norm(forward), bound)
        rep.add(mx.operator_norm(backward), bound)
        rep.add(mx.operator_norm(eye - forward), bound - 1.0)
        rep.add(mx.operator_norm(eye - backward), bound - 1.0)
    return rep


def check_damped_newton(F: BarrierOracle, samples, alphas=(0.0, 0.25, 0.5, 0.75, 1.0),
                        instance=None):
    """Newton decrement after a damped step on ``f(v) = c^T v + F(v)``.

    ``samples`` are ``(c, x)`` pairs; steps with ``alpha ||n(x)||_x >= 1``
    are skipped.
    """
    rep = CheckReport("damped_newton", instance or repr(F))

    def decrement(c, v):
        g, H = F.derivatives(v)
        metric = LocalMetric(F, v, hessian=H)
        n = -metric.solve(c + g)
        return n, metric.norm(n)

    for c, x in samples:
        n, lam = decrement(c, x)
        for alpha in alphas:
            if alpha * lam >= 1.0:
                continue
            _, lam_plus = decrement(c, x + alpha * n)
            rep.add(lam_plus, damped_newton_bound(alpha, lam))
    return rep


def check_dual_norm_change(F: BarrierOracle, samples, instance=None):
    """``||v||*_u / ||v||*_x <= 1 / (1 - ||u - x||_x)``."""
    rep = CheckReport("dual_norm_change", instance or repr(F))
    for x, u, v in samples:
        mx = LocalMetric(F, x)
        r = mx.norm(u - x)
        rep.add(LocalMetric(F, u).dual_norm(v) / mx.dual_norm(v), 1.0 / (1.0 - r))
    return rep


def check_gradient_bound(F: BarrierOracle, samples, instance=None):
    """``||g(u) - g(x)||*_x <= r / (1 - r)``."""
    rep = CheckReport("gradient_bound", instance or repr(F))
    for sample in samples:
        x, u = sample[0], sample[1]
        mx = LocalMetric(F, x)
        r = mx.norm(u - x)
        rep.add(mx.dual_norm(F.gradient(u) - F.gradient(x)), r / (1.0 - r))
    return rep


def check_log_homogeneity(F: BarrierOracle, points, rng, instance=None):
    """``H(x) x = -g(x)``, ``(||g||*_x)^2 = nu``, ``||x||_x = sqrt(nu)`` and
    ``F(t x) = F(x) - nu log t`` for ``t`` in ``[0.1, 10]``."""
    rep = CheckReport("log_homogeneity", instance or repr(F))
    for x in points:
        g, H = F.derivatives(x)
        metric = LocalMetric(F, x, hessian=H)
        gn = np.linalg.norm(g)
        rep.add(np.linalg.norm(H @ x + g), 1e-9 * gn, slack=0.0)
        rep.add(abs(metric.dual_norm(g) ** 2 - F.nu), 1e-8 * F.nu, slack=0.0)
        rep.add(abs(metric.norm(x) ** 2 - F.nu), 1e-8 * F.nu, slack=0.0)
        t = math.exp(rng.uniform(math.log(0.1), math.log(10.0)))
        fx = F.value(x)
        rep.add(abs(F.value(t * x) - fx + F.nu * math.log(t)), 1e-9 * max(1.0, abs(fx)), slack=0.0)
    return rep


def check_finite_differences(F: BarrierOracle, points, instance=None):
    """Central differences of ``F`` against ``g`` (relative 1e-5) and of
    ``g`` against ``H`` (relative 1e-4)."""
    rep = CheckReport("finite_differences", instance or repr(F))
    for x in points:
        g, H = F.derivatives(x)
        metric = LocalMetric(F, x, hessian=H)
        fd_g = np.empty(F.dim)
        fd_H = np.empty((F.dim, F.dim))
        for j in range(F.dim):
            # step of 1e-4 in the local norm keeps x +- h e_j well inside the cone
            e = np.zeros(F.dim)
            e[j] = 1.0
            h = 1e-4 / metric.norm(e)
            fd_g[j] = (F.value(x + h * e) - F.value(x - h * e)) / (2 * h)
            fd_H[:, j] = (F.gradient(x + h * e) - F.gradient(x - h * e)) / (2 * h)
        rep.add(np.linalg.norm(fd_g - g), 1e-5 * np.linalg.norm(g), slack=0.0)
        rep.add(np.linalg.norm(fd_H - H), 1e-4 * np.linalg.norm(H), slack=0.0)
    return rep


def check_conjugacy(F: BarrierOracle, samples, instance=None, tol=1e-6):
    """Conjugate quantities through Newton inversion of ``s = -g(x)``.

    ``samples`` are ``(x0, u)`` pairs.  Checks the round trip
    ``-g*(-g(x0)) = x0`` in the local norm, the dual-norm identity
    ``||u||*_s = ||u||*_x0`` with ``H*(s)`` taken from central differences
    of the inverse map, and ``||g*(s)||*_s = sqrt(nu)``.
    """
    rep = CheckReport("conjugacy", instance or repr(F))
    for x0, u in samples:
        s = -F.gradient(x0)
        try:
            x = conjugate_gradient_inverse(F, s, tol=1e-13)
            mx0 = LocalMetric(F, x0)
            rep.add(mx0.norm(x - x0), tol, slack=0.0)
            # g*(s) = -x(s) with g(x(s)) = -s, so H*(s) = -dx/ds = H(x)^-1
            Hstar = np.empty((F.dim, F.dim))
            for j in range(F.dim):
                e = np.zeros(F.dim)
                e[j] = 1.0
                h = 1e-5 / mx0.dual_norm(e)
                xp = conjugate_gradient_inverse(F, s + h * e, tol=1e-14, x0=x)
                xm = conjugate_gradient_inverse(F, s - h * e, tol=1e-14, x0=x)
                Hstar[:, j] = -(xp - xm) / (2 * h)
            Hstar = 0.5 * (Hstar + Hstar.T)
            ref = mx0.dual_norm(u)
            rep.add(abs(math.sqrt(max(u @ Hstar @ u, 0.0)) - ref), tol * ref, slack=0.0)
            gnorm = math.sqrt(max(x @ np.linalg.solve(Hstar, x), 0.0))
            rep.add(abs(gnorm - math.sqrt(F.nu)), tol * math.sqrt(F.nu), slack=0.0)
        except NoConvergence as exc:
            rep.fail(str(exc))
    return rep


# ---------------------------------------------------------------------------
# predictor and corrector analysis

def _describe(p, theta):
    return f"random HSD instances in N({theta:g})"


def check_predictor_step_bounds(instances, eta, alpha_fractions=(0.1, 0.3, 0.5, 0.7, 0.9),
                           presets=(1, 2)):
    """Predictor direction bounds, gap change, interiority and the corrected
    proximity bound, for steps ``alpha = f / kappa_x`` and the preset steps.

    Returns a list of reports: direction bounds, exact residual/gap
    identities, gap-change bounds, interiority, and the proximity bound.
    """
    bounds = CheckReport("predictor_direction_bounds", _describe(None, eta))
    ident = CheckReport("predictor_identities", _describe(None, eta))
    gap = CheckReport("predictor_gap_change", _describe(None, eta))
    inter = CheckReport("predictor_interiority", _describe(None, eta))
    prop = CheckReport("predictor_proximity_bound", _describe(None, eta))
    for p, G, Fbar, z in instances:
        nubar = Fbar.nu
        const = step_constants(eta, nubar)
        kx, ks = const.kappa_x, const.kappa_s
        metric = LocalMetric(Fbar, z.xbar)
        mu0 = mu(z, nubar)
        dz = predictor_direction(G, z, Fbar)
        bounds.add(metric.norm(dz.dxbar), kx)
        bounds.add(metric.dual_norm(dz.dsbar), ks * mu0)
        psi0 = psi(z.xbar, z.sbar, mu0, Fbar)
        r0 = residual(G, z)
        steps = [f / kx for f in alpha_fractions]
        steps += [fixed_predictor_alpha(k, const) for k in presets]
        for alpha in steps:
            zp = apply_step(z, dz, alpha)
            mup = mu(zp, nubar)
            scale = max(1.0, np.linalg.norm(r0))
            ident.add(np.linalg.norm(residual(G, zp) - (1 - alpha) * r0), 1e-10 * scale, slack=0.0)
            expected = (1 - alpha) * (mu0 + alpha / nubar * psi0 @ dz.dxbar)
            ident.add(abs(mup - expected), 1e-10 * mu0, slack=0.0)
            h = alpha * eta * kx / nubar
            gap.add(abs(mup - mu0), mu0 * alpha * (1 + (1 - alpha) * eta * kx / nubar))
            gap.add((1 - alpha) * (1 - h), mup / mu0)
            gap.add(mup / mu0, (1 - alpha) * (1 + h))
            if not Fbar.is_interior(zp.xbar):
                inter.fail("xbar+ not interior")
                continue
            inter.add(0.0, 1.0)
            q = proximity(zp, Fbar)
            if q < 1.0:
                # independent dual-cone oracle, not the proximity test itself
                if Fbar.dual_interior(zp.sbar):
                    inter.add(0.0, 1.0)
                else:
                    inter.fail("sbar+ not dual interior")
            prop.add(q, predictor_proximity_bound(alpha * kx, eta))
    return [bounds, ident, gap, inter, prop]


def check_corrector_step_bounds(instances, theta, alphas=(0.0, 0.25, 0.5, 0.75, 1.0)):
    """Corrector direction bounds, orthogonality, gap change, interiority
    and the corrected proximity bound for ``alpha_c`` in ``alphas``."""
    bounds = CheckReport("corrector_direction_bounds", _describe(None, theta))
    ident = CheckReport("corrector_identities", _describe(None, theta))
    gap = CheckReport("corrector_gap_change", _describe(None, theta))
    inter = CheckReport("corrector_interiority", _describe(None, theta))
    prop = CheckReport("corrector_proximity_bound", _describe(None, theta))
    for p, G, Fbar, z in instances:
        nubar = Fbar.nu
        metric = LocalMetric(Fbar, z.xbar)
        mu0 = mu(z, nubar)
        psi0 = psi(z.xbar, z.sbar, mu0, Fbar)
        dz = corrector_direction(G, z, Fbar)
        dxn = metric.norm(dz.dxbar)
        bounds.add(dxn, theta)
        bounds.add(metric.dual_norm(dz.dsbar), theta * mu0)
        ortho_scale = max(1e-300, np.linalg.norm(dz.dxbar) * np.linalg.norm(dz.dsbar))
        ident.add(abs(dz.dxbar @ dz.dsbar), 1e-10 * ortho_scale, slack=0.0)
        r0 = residual(G, z)
        for alpha in alphas:
            bounds.add(metric.dual_norm(psi0 + alpha * dz.dsbar), theta * mu0)
            zp = apply_step(z, dz, alpha)
            mup = mu(zp, nubar)
            ident.add(np.linalg.norm(residual(G, zp) - r0), 1e-12 * max(1.0, np.linalg.norm(r0)),
                      slack=0.0)
            ident.add(abs(mup - mu0 * (1 - alpha / nubar * dxn ** 2)), 1e-10 * mu0, slack=0.0)
            gap.add(abs(mup - mu0), alpha / nubar * theta ** 2 * mu0)
            gap.add(1 - alpha / nubar * theta ** 2, mup / mu0)
            gap.add(mup / mu0, 1.0)
            if not (Fbar.is_interior(zp.xbar) and Fbar.dual_interior(zp.sbar)):
                inter.fail("z+ not interior")
                continue
            inter.add(0.0, 1.0)
            prop.add(proximity(zp, Fbar), corrector_proximity_bound(theta, alpha))
    return [bounds, ident, gap, inter, prop]


def check_phase_invariants(instances, preset):
    """From ``z`` in ``N(eta)``: the fixed predictor step lands in
    ``N(beta)``, every corrector contracts proximity by ``epsilon``, and the
    phase ends in ``N(eta)``."""
    from .solver import PRESETS

    beta, eps, rc = PRESETS[preset]
    eta = beta * eps ** rc
    pred = CheckReport("phase_predictor_lands_in_N_beta", f"preset {preset}")
    corr = CheckReport("phase_corrector_contraction", f"preset {preset}")
    end = CheckReport("phase_returns_to_N_eta", f"preset {preset}")
    for p, G, Fbar, z in instances:
        const = step_constants(eta, Fbar.nu)
        z = apply_step(z, predictor_direction(G, z, Fbar), fixed_predictor_alpha(preset, const))
        q = proximity(z, Fbar)
        pred.add(q, beta, slack=0.0)
        for _ in range(rc):
            z = apply_step(z, corrector_direction(G, z, Fbar), 1.0)
            q_new = proximity(z, Fbar)
            corr.add(q_new, eps * q, slack=1e-12)
            q = q_new
        end.add(q, eta, slack=0.0)
    return [pred, corr, end]


def check_preset_bounds():
    """The corrected proximity bounds evaluated at the preset constants.

    Predictor: ``c_p = 0.020, eta = 0.10`` against ``beta = 0.20`` and
    ``c_p = 0.025, eta = 0.1225`` against ``0.25``.  Corrector at
    ``alpha_c = 1``: ``theta = 0.20`` against ``0.10`` and ``theta = 0.25``
    against ``0.175``.  No slack.
    """
    reports = []
    for cp, eta, beta in ((0.020, 0.10, 0.20), (0.025, 0.1225, 0.25)):
        rep = CheckReport("preset_predictor_bound", f"c_p={cp:g}, eta={eta:g}")
        rep.add(predictor_proximity_bound(cp, eta), beta, slack=0.0)
        reports.append(rep)
    for theta, target in ((0.20, 0.50 * 0.20), (0.25, 0.70 * 0.25)):
        rep = CheckReport("preset_corrector_bound", f"theta={theta:g}, alpha_c=1")
        rep.add(corrector_proximity_bound(theta, 1.0), target, slack=0.0)
        reports.append(rep)
    return reports


# ---------------------------------------------------------------------------
# Fixed counterexample points

@dataclass(frozen=True)
class CounterexampleFixture:
    """The two-variable LP ``min 2x1 + 3x2 s.t. 5x1 - 3x2 = 12, x >= 0`` with
    the printed iterates and step sizes."""

    A: tuple = ((5.0, -3.0),)
    b: tuple = (12.0,)
    c: tuple = (2.0, 3.0)
    beta: float = 0.30
    eta: float = 0.15
    alpha_p: float = 0.052
    alpha_c: float = 1.0 / 84.0
    # (x1, x2, tau, y, s1, s2, kappa)
    predictor_point: tuple = (0.9310, 0.6995, 0.8511, 0.0224, 0.8246, 1.0891, 0.9023)
    corrector_point: tuple = (0.9830, 0.9304, 0.9670, 0.0042, 0.9650, 1.0176, 0.9810)

    def problem(self):
        return ConicProblem(np.array(self.A), np.array(self.b), np.array(self.c),
                            ConeSpec.nonneg(2))

    @staticmethod
    def point(values):
        x1, x2, tau, y, s1, s2, kappa = values
        return HsdPoint(np.array([x1, x2, tau]), np.array([y]), np.array([s1, s2, kappa]))


FIXTURE = CounterexampleFixture()


def refuted_inequality_terms(G, z, dz, alpha, Fbar):
    """Return ``(lhs, rhs, q)`` for the refuted step bound at ``z + alpha dz``.

    ``q = mu+^-1 ||sbar+ + mu+ gbar(xbar)||*_xbar`` (old centre),
    ``lhs = ||psi(xbar+, sbar+, mu+)||*_{xbar+}``, ``rhs = mu+ q^2/(1-q)^2``.
    """
    zp = apply_step(z, dz, alpha)
    mup = mu(zp, Fbar.nu)
    q = LocalMetric(Fbar, z.xbar).dual_norm(zp.sbar + mup * Fbar.gradient(z.xbar)) / mup
    lhs = LocalMetric(Fbar, zp.xbar).dual_norm(psi(zp.xbar, zp.sbar, mup, Fbar))
    return lhs, refuted_bound(mup, q), q, zp


def reproduce_counterexamples(fixture: CounterexampleFixture = FIXTURE):
    """Rebuild both counterexamples; every report passes iff reproduced.

    Reports: neighborhood membership of the printed points, the three step
    conditions on ``alpha_p``, ``q < 1``, the strict violations (reported
    as ``bound < measured``), and the corrected bounds on the same steps.
    """
    p = fixture.problem()
    Fbar = homogenize(p.barrier())
    G = build_g(p)
    const = step_constants(fixture.eta, Fbar.nu)
    reports = []

    zp = fixture.point(fixture.predictor_point)
    zc = fixture.point(fixture.corrector_point)
    rep = CheckReport("fixture_membership", "predictor point in N(eta)")
    rep.add(proximity(zp, Fbar), fixture.eta, slack=0.0)
    reports.append(rep)
    rep = CheckReport("fixture_membership", "corrector point in N(beta)")
    rep.add(proximity(zc, Fbar), fixture.beta, slack=0.0)
    reports.append(rep)

    a = fixture.alpha_p
    for label, bound in (("alpha_p <= 1/kappa_x", 1.0 / const.kappa_x),
                         ("alpha_p <= (1-eta)/kappa_s", (1.0 - fixture.eta) / const.kappa_s),
                         ("alpha_p <= 1/(11 sqrt(nubar))", 1.0 / (11.0 * math.sqrt(Fbar.nu)))):
        rep = CheckReport("fixture_step_condition", label)
        rep.add(a, bound, slack=0.0)
        reports.append(rep)

    cases = (
        ("predictor", zp, predictor_direction(G, zp, Fbar), a,
         lambda q: predictor_proximity_bound(a * const.kappa_x, fixture.eta)),
        ("corrector", zc, corrector_direction(G, zc, Fbar), fixture.alpha_c,
         lambda q: corrector_proximity_bound(fixture.beta, fixture.alpha_c)),
    )
    for label, z, dz, alpha, corrected in cases:
        lhs, rhs, q, znew = refuted_inequality_terms(G, z, dz, alpha, Fbar)
        rep = CheckReport("fixture_q_below_one", f"{label} step")
        rep.add(q, 1.0, slack=0.0)
        reports.append(rep)
        rep = CheckReport("violation_reproduced", f"{label} step: bound < measured", strict=True)
        rep.add(rhs, lhs)
        reports.append(rep)
        rep = CheckReport("corrected_bound_holds", f"{label} step")
        rep.add(proximity(znew, Fbar), corrected(q), slack=0.0)
        reports.append(rep)
    return reports


# ---------------------------------------------------------------------------
# suites

SUITES = ("all", "selfconcordance", "predictor", "corrector", "counterexamples")


def selfconcordance_suite(samples, seed):
    reports = []
    for label, F in shipped_barriers().items():
        rng = _rng(seed, "ball:" + label)
        pairs = sample_ball_pairs(F, samples, rng)
        reports.append(check_self_concordance_ratio(F, pairs, label))
        reports.append(check_hessian_operator_bounds(F, pairs, label))
        reports.append(check_dual_norm_change(F, pairs, label))
        reports.append(check_gradient_bound(F, pairs, label))
        rng = _rng(seed, "newton:" + label)
        reports.append(check_damped_newton(F, sample_newton_instances(F, samples, rng), instance=label))
        rng = _rng(seed, "points:" + label)
        points = [F.sample_interior(rng) for _ in range(samples)]
        reports.append(check_log_homogeneity(F, points, rng, label))
        reports.append(check_finite_differences(F, points, label))
        rng = _rng(seed, "conj:" + label)
        conj = [(F.sample_interior(rng), rng.normal(size=F.dim)) for _ in range(samples)]
        reports.append(check_conjugacy(F, conj, label))
    return reports


def predictor_suite(samples, seed):
    reports = []
    for eta in (0.10, 0.1225):
        rng = _rng(seed, f"pred:{eta}")
        reports += check_predictor_step_bounds(sample_hsd_instances(samples, eta, rng), eta)
    reports += check_preset_bounds()[:2]
    return reports


def corrector_suite(samples, seed):
    reports = []
    for theta in (0.20, 0.25, 0.30):
        rng = _rng(seed, f"corr:{theta}")
        reports += check_corrector_step_bounds(sample_hsd_instances(samples, theta, rng), theta)
    reports += check_preset_bounds()[2:]
    from .solver import PRESETS

    for preset in (1, 2):
        beta, eps, rc = PRESETS[preset]
        rng = _rng(seed, f"phase:{preset}")
        reports += check_phase_invariants(
            sample_hsd_instances(samples, beta * eps ** rc, rng), preset)
    return reports


def run_suite(name="all", samples=1000, seed=0):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    reports = []
    if name in ("all", "selfconcordance"):
        reports += selfconcordance_suite(samples, seed)
    if name in ("all", "predictor"):
        reports += predictor_suite(samples, seed)
    if name in ("all", "corrector"):
        reports += corrector_suite(samples, seed)
    if name in ("all", "counterexamples"):
        reports += reproduce_counterexamples()
    return reports
