"""Predictor and corrector directions and step-size rules."""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.linalg.lapack import dgecon

from .barriers import BarrierOracle
from .errors import ConditioningError, ParameterError
from .hsd import HsdPoint, in_neighborhood, mu, residual

RCOND_MIN = 1e-14

PREDICTOR_CONSTANT = {1: 0.020, 2: 0.025}


@dataclass
class StepDirection:
    dxbar: np.ndarray
    dy: np.ndarray
    dsbar: np.ndarray
    kind: str


@dataclass(frozen=True)
class StepConstants:
    kappa_x: float
    kappa_s: float
    eta: float
    nubar: float


def step_constants(eta, nubar) -> StepConstants:
    """Predictor direction bounds for ``z`` in ``N(eta)``.

    ``kappa_x = eta + sqrt(2 eta^2 + nubar)`` bounds ``||dxbar||_xbar`` and
    ``kappa_s = kappa_x + sqrt(kappa_x^2 + eta^2 + nubar)`` bounds
    ``||dsbar||*_xbar / mu``.
    """
    if not 0.0 <= eta <= 1.0:
        raise ParameterError(f"eta must lie in [0, 1], got {eta}")
    if not nubar >= 2.0:
        raise ParameterError(f"nubar must be at least 2, got {nubar}")
    kx = eta + math.sqrt(2.0 * eta * eta + nubar)
    ks = kx + math.sqrt(kx * kx + eta * eta + nubar)
    return StepConstants(kx, ks, float(eta), float(nubar))


def fixed_predictor_alpha(preset, constants: StepConstants) -> float:
    try:
        cp = PREDICTOR_CONSTANT[int(preset)]
    except (KeyError, ValueError, TypeError):
        raise ParameterError(f"unknown preset {preset!r}") from None
    return cp / constants.kappa_x


def _lu_checked(K):
    with warnings.catch_warnings():
        # exact singularity is reported through the condition estimate below
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(K, check_finite=False)
    anorm = np.linalg.norm(K, 1)
    rcond, info = dgecon(lu, anorm, norm="1")
    if info != 0 or not rcond >= RCOND_MIN:
        raise ConditioningError(f"KKT matrix is numerically singular (rcond={rcond:.3e})")
    return lu, piv


class _MetricScaling:
    """Change of variables ``dxbar = W^-T u``, ``dsbar = W w`` with
    ``W W^T = I + mu H`` (Cholesky).

    Rows of the ``xbar`` equations are multiplied by ``W^-1``.  Since
    ``||W^-1|| <= 1`` the skew part of ``G`` stays bounded, while
    ``W^-1 (I + mu H) W^-T = I`` tames the barrier block even when the
    Hessian's large eigenvalues are not aligned with coordinates.  For
    diagonal ``H`` the factor is kept as a vector.
    """

    def __init__(self, H, mu_):
        if not (mu_ > 0 and math.isfinite(mu_)):
            raise ConditioningError(f"complementarity gap unusable for scaling: {mu_}")
        self.hdiag = np.diag(H)
        self.diagonal = not np.any(H - np.diag(self.hdiag))
        if self.diagonal:
            if not np.all(self.hdiag > 0):
                raise ConditioningError("Hessian is not positive definite")
            self.winv = 1.0 / np.sqrt(1.0 + mu_ * self.hdiag)
        else:
            try:
                self.W = np.linalg.cholesky(np.eye(H.shape[0]) + mu_ * H)
            except np.linalg.LinAlgError as exc:
                raise ConditioningError("Hessian is not numerically positive definite") from exc

    def inv(self, v):
        """``W^-1 v`` (columnwise for matrices)."""
        if self.diagonal:
            return v * self.winv.reshape((-1,) + (1,) * (np.ndim(v) - 1))
        return sla.solve_triangular(self.W, v, lower=True, check_finite=False)

    def inv_t(self, v):
        """``W^-T v``."""
        if self.diagonal:
            return v * self.winv.reshape((-1,) + (1,) * (np.ndim(v) - 1))
        return sla.solve_triangular(self.W, v, lower=True, trans="T", check_finite=False)

    def mul(self, v):
        """``W v``."""
        return v / self.winv if self.diagonal else self.W @ v

    def congruence(self, M):
        """``W^-1 M W^-T``."""
        if self.diagonal:
            return M * np.outer(self.winv, self.winv)
        return self.inv(self.inv(M).T).T


def solve_newton_system(G, H, mu_, rhs_g, rhs_b, method="reduced"):
    """Solve ``G (dy; dxbar) - (0; dsbar) = rhs_g`` and
    ``dsbar + mu H dxbar = rhs_b``.

    ``method="full"`` factors the whole square system in ``(dy, dxbar,
    dsbar)``; ``method="reduced"`` substitutes ``dsbar`` from the second
    block first.  Both work in the variables of :class:`_MetricScaling`,
    check the condition estimate of the scaled matrix against
    ``RCOND_MIN``, and apply one step of iterative refinement against the
    unscaled equations.  Returns ``(dy, dxbar, dsbar)``.
    """
    if method not in ("full", "reduced"):
        raise ParameterError(f"unknown linear solve method {method!r}")
    N = H.shape[0]
    m = G.shape[0] - N
    sc = _MetricScaling(H, mu_)
    Byx = sc.inv(G[:m, m:].T).T  # Gyx W^-T
    norms = np.linalg.norm(Byx, axis=1)
    dy_scale = 1.0 / np.where(norms > 0, norms, 1.0)
    size = m + N if method == "reduced" else m + 2 * N
    Ks = np.zeros((size, size))
    Ks[:m, :m] = dy_scale[:, None] * G[:m, :m] * dy_scale[None, :]
    Ks[:m, m:m + N] = dy_scale[:, None] * Byx
    Ks[m:m + N, :m] = sc.inv(G[m:, :m]) * dy_scale[None, :]
    Ks[m:m + N, m:m + N] = sc.congruence(G[m:, m:])
    # W^-1 mu H W^-T has eigenvalues in [0, 1)
    if sc.diagonal:
        Hs = np.diag(mu_ * sc.hdiag * sc.winv ** 2)
    else:
        Hs = sc.congruence(mu_ * H)
        Hs = 0.5 * (Hs + Hs.T)
    idx = np.arange(N)
    if method == "full":
        Ks[m + idx, m + N + idx] = -1.0
        Ks[m + N:, m:m + N] = Hs
        Ks[m + N + idx, m + N + idx] = 1.0
        rhs = np.concatenate([rhs_g, rhs_b])

        def apply(v):
            dy, dx, ds = v[:m], v[m:m + N], v[m + N:]
            top = G @ v[:m + N]
            top[m:] -= ds
            return np.concatenate([top, ds + mu_ * (H @ dx)])

        def rows(r):
            return np.concatenate([dy_scale * r[:m], sc.inv(r[m:m + N]), sc.inv(r[m + N:])])

        def cols(u):
            return np.concatenate([dy_scale * u[:m], sc.inv_t(u[m:m + N]), sc.mul(u[m + N:])])
    else:
        Ks[m:, m:] += Hs
        rhs = rhs_g.copy()
        rhs[m:] += rhs_b

        def apply(v):
            out = G @ v
            out[m:] += mu_ * (H @ v[m:])
            return out

        def rows(r):
            return np.concatenate([dy_scale * r[:m], sc.inv(r[m:])])

        def cols(u):
            return np.concatenate([dy_scale * u[:m], sc.inv_t(u[m:])])

    lu = _lu_checked(Ks)
    sol = cols(sla.lu_solve(lu, rows(rhs), check_finite=False))
    sol += cols(sla.lu_solve(lu, rows(rhs - apply(sol)), check_finite=False))
    if method == "full":
        return sol[:m], sol[m:m + N], sol[m + N:]
    dy, dx = sol[:m], sol[m:]
    return dy, dx, rhs_b - mu_ * (H @ dx)


def predictor_direction(G, z: HsdPoint, Fbar: BarrierOracle, method="reduced", hessian=None):
    """Affine direction: reduce the residual by the full step and push
    ``sbar + mu H dxbar`` to ``-sbar``."""
    H = Fbar.hessian(z.xbar) if hessian is None else hessian
    dy, dx, ds = solve_newton_system(
        G, H, mu(z, Fbar.nu), -residual(G, z), -z.sbar, method=method)
    return StepDirection(dx, dy, ds, "predictor")


def corrector_direction(G, z: HsdPoint, Fbar: BarrierOracle, method="reduced", hessian=None):
    """Centering direction: keep the residual and cancel ``psi`` to first order."""
    g = Fbar.gradient(z.xbar)
    H = Fbar.hessian(z.xbar) if hessian is None else hessian
    mu_ = mu(z, Fbar.nu)
    rhs_g = np.zeros(G.shape[0])
    dy, dx, ds = solve_newton_system(G, H, mu_, rhs_g, -(z.sbar + mu_ * g), method=method)
    return StepDirection(dx, dy, ds, "corrector")


def system_residuals(G, z: HsdPoint, dz: StepDirection, Fbar: BarrierOracle):
    """Relative residuals of the two block equations defining ``dz``.

    Each is ``||lhs - rhs|| / max(1, ||lhs terms||, ||rhs||)``.
    """
    m = z.y.size
    mu_ = mu(z, Fbar.nu)
    H = Fbar.hessian(z.xbar)
    lin = G @ np.concatenate([dz.dy, dz.dxbar])
    lin[m:] -= dz.dsbar
    if dz.kind == "predictor":
        rhs_g = -residual(G, z)
        rhs_b = -z.sbar
    else:
        rhs_g = np.zeros_like(lin)
        rhs_b = -(z.sbar + mu_ * Fbar.gradient(z.xbar))
    scaled = mu_ * (H @ dz.dxbar)
    scale_g = max(1.0, np.linalg.norm(G, 2) * np.linalg.norm(np.concatenate([dz.dy, dz.dxbar])),
                  np.linalg.norm(dz.dsbar), np.linalg.norm(rhs_g))
    scale_b = max(1.0, np.linalg.norm(scaled), np.linalg.norm(dz.dsbar), np.linalg.norm(rhs_b))
    return (float(np.linalg.norm(lin - rhs_g)) / scale_g,
            float(np.linalg.norm(dz.dsbar + scaled - rhs_b)) / scale_b)


def apply_step(z: HsdPoint, dz: StepDirection, alpha) -> HsdPoint:
    return HsdPoint(z.xbar + alpha * dz.dxbar, z.y + alpha * dz.dy, z.sbar + alpha * dz.dsbar)


def line_search_grid(constants: StepConstants, count=61):
    alpha_max = 0.99 / constants.kappa_x
    return alpha_max * 0.9 ** np.arange(count)


def line_search_predictor(z: HsdPoint, dz: StepDirection, beta, Fbar: BarrierOracle,
                          constants: StepConstants, alpha_fixed) -> float:
    """Largest grid step keeping ``z + alpha dz`` in ``N(beta)``.

    The grid is ``0.99 / kappa_x * 0.9**k``.  Grid points below
    ``alpha_fixed`` are not tried; the fixed step is returned instead.
    """
    for alpha in line_search_grid(constants):
        if alpha < alpha_fixed:
            break
        if in_neighborhood(apply_step(z, dz, alpha), beta, Fbar):
            return float(alpha)
    return float(alpha_fixed)
