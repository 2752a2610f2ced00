"""Homogeneous self-dual embedding: data, residuals, gap and neighborhoods."""

import math
from dataclasses import dataclass

import numpy as np

from .barriers import BarrierOracle, ConeSpec, LocalMetric
from .errors import ConditioningError, ConfigurationError, DegeneratePoint


@dataclass
class ConicProblem:
    """``min c^T x  s.t.  A x = b, x in K`` with ``K`` given by ``cone``."""

    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    cone: ConeSpec

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).reshape(-1)
        n = self.c.size
        self.b = np.asarray(self.b, dtype=float).reshape(-1)
        m = self.b.size
        self.A = np.asarray(self.A, dtype=float).reshape(m, n) if m else np.zeros((0, n))
        if n == 0:
            raise ConfigurationError("problem has no variables")
        if self.cone.dim != n:
            raise ConfigurationError(
                f"cone dimensions sum to {self.cone.dim}, expected n = {n}")
        if m > n:
            raise ConfigurationError(f"more equality rows ({m}) than variables ({n})")
        if m and np.linalg.matrix_rank(self.A) < m:
            raise ConfigurationError("A does not have full row rank")

    @property
    def m(self):
        return self.b.size

    @property
    def n(self):
        return self.c.size

    def barrier(self) -> BarrierOracle:
        return self.cone.barrier()


@dataclass
class HsdPoint:
    """Iterate ``z = (xbar; y; sbar)`` with ``xbar = (x; tau)``, ``sbar = (s; kappa)``."""

    xbar: np.ndarray
    y: np.ndarray
    sbar: np.ndarray

    def __post_init__(self):
        self.xbar = np.asarray(self.xbar, dtype=float).reshape(-1)
        self.y = np.asarray(self.y, dtype=float).reshape(-1)
        self.sbar = np.asarray(self.sbar, dtype=float).reshape(-1)
        if self.xbar.shape != self.sbar.shape:
            raise ConfigurationError("xbar and sbar must have the same length")

    @property
    def x(self):
        return self.xbar[:-1]

    @property
    def tau(self):
        return float(self.xbar[-1])

    @property
    def s(self):
        return self.sbar[:-1]

    @property
    def kappa(self):
        return float(self.sbar[-1])

    def copy(self):
        return HsdPoint(self.xbar.copy(), self.y.copy(), self.sbar.copy())

    def scaled(self, t):
        return HsdPoint(t * self.xbar, t * self.y, t * self.sbar)


def build_g(p: ConicProblem) -> np.ndarray:
    """Skew-symmetric matrix acting on ``(y; x; tau)``.

    Block rows are ``[0, A, -b]``, ``[-A^T, 0, c]`` and ``[b^T, -c^T, 0]``.
    """
    m, n = p.m, p.n
    if p.A.shape != (m, n):
        raise ConfigurationError(f"A has shape {p.A.shape}, expected {(m, n)}")
    G = np.zeros((m + n + 1, m + n + 1))
    G[:m, m:m + n] = p.A
    G[:m, -1] = -p.b
    G[m:m + n, :m] = -p.A.T
    G[m:m + n, -1] = p.c
    G[-1, :m] = p.b
    G[-1, m:m + n] = -p.c
    assert np.array_equal(G.T, -G)
    return G


def residual(G, z: HsdPoint) -> np.ndarray:
    """``G (y; xbar) - (0; sbar)``; zero exactly on the HSD feasible set."""
    m = z.y.size
    r = G @ np.concatenate([z.y, z.xbar])
    r[m:] -= z.sbar
    return r


def mu(z: HsdPoint, nubar) -> float:
    """Complementarity gap ``xbar^T sbar / nubar``."""
    return float(z.xbar @ z.sbar) / nubar


def psi(xbar, sbar, t, Fbar: BarrierOracle) -> np.ndarray:
    """``sbar + t * gbar(xbar)``; vanishes on the central path at ``t = mu``."""
    return np.asarray(sbar, dtype=float) + t * Fbar.gradient(xbar)


def proximity(z: HsdPoint, Fbar: BarrierOracle, metric: LocalMetric = None) -> float:
    """Centrality measure ``||psi(xbar, sbar, mu)||*_xbar / mu``.

    Returns ``inf`` when ``xbar`` is outside the cone interior (or its
    Hessian cannot be factored) so that step searches can probe cheaply.
    Raises :class:`DegeneratePoint` when ``mu <= 0``.
    """
    if not Fbar.is_interior(z.xbar):
        return math.inf
    m_ = mu(z, Fbar.nu)
    if not m_ > 0:
        raise DegeneratePoint(f"complementarity gap is not positive: {m_}")
    g = Fbar._gradient(z.xbar)
    if metric is None:
        try:
            metric = LocalMetric(Fbar, z.xbar)
        except ConditioningError:
            return math.inf
    return metric.dual_norm(z.sbar + m_ * g) / m_


def dual_interior_certified(xbar, sbar, t, Fbar: BarrierOracle, metric=None) -> bool:
    """Sufficient test ``||sbar/t + gbar(xbar)||*_xbar < 1`` for ``sbar`` in the
    dual-cone interior.

    Since ``-gbar(xbar)`` is dual-interior and the conjugate barrier is
    self-concordant, its unit Dikin ball lies inside the dual cone.
    """
    if not (t > 0 and Fbar.is_interior(xbar)):
        return False
    if metric is None:
        metric = LocalMetric(Fbar, xbar)
    return metric.dual_norm(np.asarray(sbar) / t + Fbar._gradient(xbar)) < 1.0


def in_neighborhood(z: HsdPoint, theta, Fbar: BarrierOracle) -> bool:
    """Membership in ``N(theta)``: interior iterate with proximity at most theta.

    The linear residual is not part of the test; it is allowed to be nonzero.
    """
    try:
        value = proximity(z, Fbar)
    except DegeneratePoint:
        return False
    # value < 1 doubles as the dual-interior certificate for sbar
    return value <= theta and value < 1.0
