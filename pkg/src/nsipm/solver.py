"""Predictor-corrector loop on the homogeneous self-dual embedding."""

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .barriers import BarrierOracle, LocalMetric, homogenize
from .errors import InvariantViolation, ParameterError
from .hsd import ConicProblem, HsdPoint, build_g, mu, residual
from .steps import (
    PREDICTOR_CONSTANT,
    apply_step,
    corrector_direction,
    fixed_predictor_alpha,
    line_search_predictor,
    predictor_direction,
    step_constants,
)

log = logging.getLogger(__name__)

# preset -> (beta, epsilon, corrector steps)
PRESETS = {1: (0.20, 0.50, 1), 2: (0.25, 0.70, 2)}

OPTIMAL = "optimal"
PRIMAL_INFEASIBLE = "primal-infeasible"
DUAL_INFEASIBLE = "dual-infeasible"
ILL_POSED = "ill-posed"
ITERATION_LIMIT = "iteration-limit"


@dataclass
class SolverParams:
    """Algorithm parameters.

    ``preset`` fixes ``beta``, the contraction factor ``epsilon`` and the
    number of corrector steps; the neighborhood radius for the start of a
    predictor is ``eta = beta * epsilon**rc``.  ``corrector_steps``
    overrides ``rc`` experimentally: phase invariants are then recorded but
    not enforced, since no parameter table backs them.
    """

    preset: int = 1
    eps: float = 1e-8
    max_iters: Optional[int] = None
    line_search: bool = False
    tau_kappa_ratio_tol: float = 1e-6
    verify_tol: Optional[float] = None
    method: str = "reduced"
    check_invariants: bool = True
    corrector_steps: Optional[int] = None

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ParameterError(f"preset must be 1 or 2, got {self.preset!r}")
        if not 0.0 < self.eps < 1.0:
            raise ParameterError(f"eps must lie in (0, 1), got {self.eps}")
        if self.max_iters is not None and self.max_iters < 0:
            raise ParameterError("max_iters must be nonnegative")
        if self.corrector_steps is not None and self.corrector_steps < 1:
            raise ParameterError("corrector_steps must be positive")

    @property
    def beta(self):
        return PRESETS[self.preset][0]

    @property
    def contraction(self):
        return PRESETS[self.preset][1]

    @property
    def rc(self):
        if self.corrector_steps is not None:
            return self.corrector_steps
        return PRESETS[self.preset][2]

    @property
    def eta(self):
        return self.beta * self.contraction ** self.rc

    @property
    def alpha_c(self):
        return 1.0

    @property
    def experimental(self):
        return self.corrector_steps is not None and self.corrector_steps != PRESETS[self.preset][2]

    @property
    def tolerance_for_verification(self):
        if self.verify_tol is not None:
            return self.verify_tol
        return min(1e-2, max(1e2 * self.eps, 1e-10))


@dataclass
class TraceRecord:
    iter: int
    phase: str
    alpha: float
    mu: float
    residual_norm: float
    proximity_before: float
    proximity_after: float
    kappa_x: float
    wall_ms: float


@dataclass
class IterationTrace:
    records: list = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def append(self, record: TraceRecord):
        self.records.append(record)

    def column(self, name):
        return np.array([getattr(r, name) for r in self.records])


@dataclass
class SolveOutcome:
    status: str
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    s: Optional[np.ndarray] = None
    mu: float = math.nan
    residual_norm: float = math.nan
    iterations: int = 0
    trace: IterationTrace = field(default_factory=IterationTrace)
    primal_objective: float = math.nan
    dual_objective: float = math.nan
    tau: float = math.nan
    kappa: float = math.nan
    diagnostics: dict = field(default_factory=dict)
    point: Optional[HsdPoint] = None


def initial_point(p: ConicProblem, Fbar: BarrierOracle = None) -> HsdPoint:
    """Perfectly centred start: ``sbar = -gbar(xbar)`` at the cone anchor, ``y = 0``."""
    if Fbar is None:
        Fbar = homogenize(p.barrier())
    xbar = Fbar.anchor()
    return HsdPoint(xbar, np.zeros(p.m), -Fbar.gradient(xbar))


def iteration_bound_estimate(nu, eps, preset=1) -> int:
    """``C sqrt(nu) log(1/eps)`` with ``C = 2 / c_p`` for the preset's
    predictor constant ``c_p = alpha_p * kappa_x``.

    A fixed predictor step shrinks both gaps by about ``1 - c_p/kappa_x``
    and ``kappa_x <= 2 sqrt(nu_bar)`` for ``nu >= 1``.
    """
    if nu < 1:
        raise ParameterError("nu must be at least 1")
    if not 0.0 < eps <= 1.0:
        raise ParameterError("eps must lie in (0, 1]")
    C = 2.0 / PREDICTOR_CONSTANT[preset]
    return int(math.ceil(C * math.sqrt(nu) * math.log(1.0 / eps)))


def check_termination(z: HsdPoint, z0: HsdPoint, params: SolverParams, G, nubar):
    """Return ``None`` to continue, else ``"converged"`` or ``"certificate"``.

    Convergence requires ``mu(z) <= eps mu(z0)`` and the residual norm at
    most ``eps`` times its initial value; a zero initial residual makes the
    second test vacuous.  ``"certificate"`` signals ``tau`` negligible
    against ``kappa``, which the caller confirms with a verified ray.
    """
    eps = params.eps
    mu_ok = mu(z, nubar) <= eps * mu(z0, nubar)
    r0 = np.linalg.norm(residual(G, z0))
    res_ok = r0 == 0.0 or np.linalg.norm(residual(G, z)) <= eps * r0
    if mu_ok and res_ok:
        return "converged"
    if z.tau < params.tau_kappa_ratio_tol * z.kappa:
        return "certificate"
    return None


def _rel(num, *scales):
    return float(num) / (1.0 + sum(abs(float(s)) for s in scales))


def _inf_normalize(*vecs):
    scale = max(float(np.max(np.abs(v), initial=0.0)) for v in vecs)
    if scale == 0.0:
        return vecs
    return tuple(v / scale for v in vecs)


def classify_solution(z: HsdPoint, p: ConicProblem, tol=1e-6, verify_tol=1e-6) -> SolveOutcome:
    """Turn a terminal HSD iterate into a solution or certificate.

    ``tau > tol max(1, kappa)`` -> scale by ``1/tau`` and verify primal and
    dual feasibility and the duality gap.  ``kappa > tol max(1, tau)`` ->
    look for ``b^T y > 0`` (primal infeasibility, ``A^T y + s = 0``) and
    ``c^T x < 0`` (dual infeasibility, ``A x = 0``), report the larger
    normalized margin among verified rays.  Otherwise, or when verification
    fails, the status is ill-posed.
    """
    A, b, c = p.A, p.b, p.c
    tau, kappa = z.tau, z.kappa
    out = SolveOutcome(ILL_POSED, tau=tau, kappa=kappa, point=z)
    if tau > tol * max(1.0, kappa):
        x, y, s = z.x / tau, z.y / tau, z.s / tau
        cx, by = float(c @ x), float(b @ y)
        pres = _rel(np.linalg.norm(A @ x - b), np.linalg.norm(b))
        dres = _rel(np.linalg.norm(A.T @ y + s - c), np.linalg.norm(c))
        gap = _rel(abs(cx - by), cx, by)
        out.diagnostics.update(primal_residual=pres, dual_residual=dres, relative_gap=gap)
        out.x, out.y, out.s = x, y, s
        out.primal_objective, out.dual_objective = cx, by
        if max(pres, dres, gap) <= verify_tol:
            out.status = OPTIMAL
        else:
            out.diagnostics["reason"] = "scaled solution failed verification"
        return out
    if kappa > tol * max(1.0, tau):
        anorm = np.linalg.norm(A, 2) if A.size else 0.0
        candidates = []
        y, s = _inf_normalize(z.y, z.s)
        by = float(b @ y)
        cert_res = float(np.linalg.norm(A.T @ y + s))
        out.diagnostics.update(primal_ray_margin=by, primal_ray_residual=cert_res)
        if by > verify_tol and cert_res <= verify_tol * (1.0 + anorm):
            candidates.append((by, PRIMAL_INFEASIBLE))
        (x,) = _inf_normalize(z.x)
        cx = float(c @ x)
        ray_res = float(np.linalg.norm(A @ x)) if A.size else 0.0
        out.diagnostics.update(dual_ray_margin=-cx, dual_ray_residual=ray_res)
        if -cx > verify_tol and ray_res <= verify_tol * (1.0 + anorm):
            candidates.append((-cx, DUAL_INFEASIBLE))
        if not candidates:
            out.diagnostics["reason"] = "no certificate passed verification"
            return out
        _, status = max(candidates)
        out.status = status
        if status == PRIMAL_INFEASIBLE:
            out.y, out.s = y, s
            out.dual_objective = by
        else:
            out.x = x
            out.primal_objective = cx
        return out
    out.diagnostics["reason"] = "tau and kappa both negligible"
    return out


class _Evaluated:
    """Barrier quantities at one iterate, computed once."""

    def __init__(self, z: HsdPoint, Fbar: BarrierOracle):
        if not Fbar.is_interior(z.xbar):
            raise InvariantViolation("iterate left the cone interior", {"z": z})
        self.z = z
        self.g, self.H = Fbar.derivatives(z.xbar)
        self.metric = LocalMetric(Fbar, z.xbar, hessian=self.H)
        self.mu = mu(z, Fbar.nu)
        if not self.mu > 0:
            raise InvariantViolation(f"complementarity gap not positive: {self.mu}", {"z": z})
        self.proximity = self.metric.dual_norm(z.sbar + self.mu * self.g) / self.mu


def solve(p: ConicProblem, params: SolverParams = None, on_record=None) -> SolveOutcome:
    """Run the predictor-corrector method on ``p``.

    ``on_record`` is called with each :class:`TraceRecord` as it is produced.
    """
    params = params or SolverParams()
    Fbar = homogenize(p.barrier())
    nubar = Fbar.nu
    G = build_g(p)
    z0 = initial_point(p, Fbar)
    const = step_constants(params.eta, nubar)
    alpha_p = fixed_predictor_alpha(params.preset, const)
    beta, eta, rc = params.beta, params.eta, params.rc
    max_iters = params.max_iters
    if max_iters is None:
        max_iters = 10 * iteration_bound_estimate(nubar, params.eps, params.preset)
    enforce = params.check_invariants and not params.experimental

    trace = IterationTrace()
    cur = _Evaluated(z0, Fbar)

    def record(it, phase, alpha, before, after):
        rec = TraceRecord(it, phase, alpha, after.mu, float(np.linalg.norm(residual(G, after.z))),
                          before.proximity, after.proximity, const.kappa_x,
                          (time.perf_counter() - t0) * 1e3)
        trace.append(rec)
        if on_record is not None:
            on_record(rec)

    def breach(msg, **state):
        state.update(z=cur.z, iteration=it, trace=trace)
        raise InvariantViolation(msg, state)

    t0 = time.perf_counter()
    it = 0
    status = None
    while True:
        reason = check_termination(cur.z, z0, params, G, nubar)
        if reason is not None:
            out = classify_solution(cur.z, p, params.tau_kappa_ratio_tol,
                                    params.tolerance_for_verification)
            if reason == "converged" or out.status in (PRIMAL_INFEASIBLE, DUAL_INFEASIBLE):
                break
        if it >= max_iters:
            out = classify_solution(cur.z, p, params.tau_kappa_ratio_tol,
                                    params.tolerance_for_verification)
            status = ITERATION_LIMIT
            break

        dz = predictor_direction(G, cur.z, Fbar, method=params.method, hessian=cur.H)
        alpha = alpha_p
        if params.line_search:
            alpha = line_search_predictor(cur.z, dz, beta, Fbar, const, alpha_p)
        nxt = _Evaluated(apply_step(cur.z, dz, alpha), Fbar)
        if enforce and not (nxt.proximity <= beta and cur.proximity <= eta):
            breach(f"predictor landed outside N({beta}): proximity {nxt.proximity:.6g}",
                   alpha=alpha, proximity=nxt.proximity)
        record(it, "predictor", alpha, cur, nxt)
        cur = nxt

        for _ in range(rc):
            dz = corrector_direction(G, cur.z, Fbar, method=params.method, hessian=cur.H)
            nxt = _Evaluated(apply_step(cur.z, dz, params.alpha_c), Fbar)
            record(it, "corrector", params.alpha_c, cur, nxt)
            cur = nxt
        if enforce and not cur.proximity <= eta:
            breach(f"corrector phase ended outside N({eta}): proximity {cur.proximity:.6g}",
                   proximity=cur.proximity)
        it += 1

    if status is not None:
        out.status = status
    out.mu = cur.mu
    out.residual_norm = float(np.linalg.norm(residual(G, cur.z)))
    out.iterations = it
    out.trace = trace
    out.point = cur.z
    log.debug("solve finished: %s after %d iterations (mu=%.3e)", out.status, it, out.mu)
    return out
