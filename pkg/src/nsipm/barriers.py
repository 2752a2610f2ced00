"""Logarithmically homogeneous barriers and local-norm calculus.

Every oracle exposes ``value``, ``gradient`` and ``hessian`` on the interior
of its cone together with the barrier parameter ``nu``.  Hessians are dense;
problem sizes here are small enough that a Cholesky factor per point is the
cheapest robust option.
"""

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg as sla

from .errors import (
    ConditioningError,
    ConfigurationError,
    InteriorViolation,
    NoConvergence,
)

INTERIOR_MARGIN = 1e-12

# Central point of the exponential cone for the barrier below, i.e. the
# solution of x = -g(x).  Any interior point would do as an anchor.
EXP_ANCHOR = np.array([1.2909277098569580, 0.80510200158479535, -0.82783839906567861])


class BarrierOracle:
    """Base class for a barrier ``F`` on the interior of a proper cone.

    Subclasses implement :meth:`is_interior`, :meth:`_value`,
    :meth:`_gradient`, :meth:`_hessian` and :meth:`anchor`.  The public
    evaluation methods check interiority first.
    """

    dim: int
    nu: float

    def is_interior(self, x) -> bool:
        raise NotImplementedError

    def anchor(self) -> np.ndarray:
        """A fixed interior point, used for initial iterates."""
        raise NotImplementedError

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ConfigurationError(
                f"expected a vector of length {self.dim}, got shape {x.shape}")
        if not self.is_interior(x):
            raise InteriorViolation(f"point is not interior to the cone: {x}")
        return x

    def value(self, x) -> float:
        return self._value(self._check(x))

    def gradient(self, x) -> np.ndarray:
        return self._gradient(self._check(x))

    def hessian(self, x) -> np.ndarray:
        return self._hessian(self._check(x))

    def derivatives(self, x):
        """Return ``(g, H)`` with a single interiority check."""
        x = self._check(x)
        return self._gradient(x), self._hessian(x)

    def sample_interior(self, rng) -> np.ndarray:
        """Draw a random interior point (used by tests and the verifier)."""
        raise NotImplementedError

    def dual_interior(self, s) -> bool:
        """Direct membership test for the interior of the dual cone.

        Only the verifier uses this; the solver certifies dual interiority
        through the primal barrier instead.
        """
        raise NotImplementedError


class OrthantBarrier(BarrierOracle):
    """``F(x) = -sum(log x_i)`` on the nonnegative orthant, ``nu = n``."""

    def __init__(self, n: int):
        if n < 1:
            raise ConfigurationError("orthant dimension must be positive")
        self.dim = int(n)
        self.nu = float(n)

    def __repr__(self):
        return f"OrthantBarrier({self.dim})"

    def is_interior(self, x):
        return bool(np.all(np.isfinite(x)) and np.all(x > INTERIOR_MARGIN))

    def anchor(self):
        return np.ones(self.dim)

    def _value(self, x):
        return -float(np.sum(np.log(x)))

    def _gradient(self, x):
        return -1.0 / x

    def _hessian(self, x):
        return np.diag(1.0 / (x * x))

    def sample_interior(self, rng):
        return np.exp(rng.normal(0.0, 0.7, self.dim))

    def dual_interior(self, s):
        return bool(np.all(np.asarray(s) > 0))


class ExpConeBarrier(BarrierOracle):
    """Barrier for ``cl{x : x1 >= x2 exp(x3/x2), x1, x2 > 0}``.

    ``F(x) = -log(x2 log(x1/x2) - x3) - log x1 - log x2`` with ``nu = 3``.
    """

    dim = 3
    nu = 3.0

    def __repr__(self):
        return "ExpConeBarrier()"

    @staticmethod
    def _slack(x):
        return x[1] * np.log(x[0] / x[1]) - x[2]

    def is_interior(self, x):
        if not np.all(np.isfinite(x)):
            return False
        if x[0] <= INTERIOR_MARGIN or x[1] <= INTERIOR_MARGIN:
            return False
        return bool(self._slack(x) > INTERIOR_MARGIN)

    def anchor(self):
        return EXP_ANCHOR.copy()

    def _value(self, x):
        return -float(np.log(self._slack(x)) + np.log(x[0]) + np.log(x[1]))

    def _parts(self, x):
        x1, x2, _ = x
        w = self._slack(x)
        dw = np.array([x2 / x1, np.log(x1 / x2) - 1.0, -1.0])
        return w, dw

    def _gradient(self, x):
        w, dw = self._parts(x)
        return -dw / w - np.array([1.0 / x[0], 1.0 / x[1], 0.0])

    def _hessian(self, x):
        x1, x2, _ = x
        w, dw = self._parts(x)
        d2w = np.array([
            [-x2 / x1 ** 2, 1.0 / x1, 0.0],
            [1.0 / x1, -1.0 / x2, 0.0],
            [0.0, 0.0, 0.0],
        ])
        H = np.outer(dw, dw) / w ** 2 - d2w / w
        H[0, 0] += 1.0 / x1 ** 2
        H[1, 1] += 1.0 / x2 ** 2
        return H

    def sample_interior(self, rng):
        x2 = np.exp(rng.normal(0.0, 0.5))
        x3 = rng.normal(0.0, 1.0)
        gap = np.exp(rng.normal(-0.5, 0.7))
        x1 = x2 * np.exp((x3 + gap) / x2)
        return np.array([x1, x2, x3])

    def dual_interior(self, s):
        # dual cone: s1 >= -s3 exp(s2/s3 - 1), s1 >= 0, s3 <= 0
        s1, s2, s3 = s
        if not (s3 < 0 and s1 > 0):
            return False
        return bool(np.log(s1) > np.log(-s3) + s2 / s3 - 1.0)


class ProductBarrier(BarrierOracle):
    """Sum of barriers over consecutive coordinate blocks."""

    def __init__(self, parts: Sequence[BarrierOracle]):
        parts = list(parts)
        if not parts:
            raise ConfigurationError("product barrier needs at least one part")
        self.parts = parts
        offsets = np.cumsum([0] + [p.dim for p in parts])
        self.slices = [slice(int(a), int(b)) for a, b in zip(offsets[:-1], offsets[1:])]
        self.dim = int(offsets[-1])
        self.nu = float(sum(p.nu for p in parts))

    def __repr__(self):
        return f"ProductBarrier({self.parts!r})"

    def is_interior(self, x):
        return all(p.is_interior(x[sl]) for p, sl in zip(self.parts, self.slices))

    def anchor(self):
        return np.concatenate([p.anchor() for p in self.parts])

    def _value(self, x):
        return sum(p._value(x[sl]) for p, sl in zip(self.parts, self.slices))

    def _gradient(self, x):
        return np.concatenate([p._gradient(x[sl]) for p, sl in zip(self.parts, self.slices)])

    def _hessian(self, x):
        return sla.block_diag(*[p._hessian(x[sl]) for p, sl in zip(self.parts, self.slices)])

    def sample_interior(self, rng):
        return np.concatenate([p.sample_interior(rng) for p in self.parts])

    def dual_interior(self, s):
        return all(p.dual_interior(s[sl]) for p, sl in zip(self.parts, self.slices))


class HomogenizedBarrier(BarrierOracle):
    """``Fbar(x; tau) = F(x) - log tau`` on ``K x R_+``, ``nu_bar = nu + 1``."""

    def __init__(self, base: BarrierOracle):
        self.base = base
        self.dim = base.dim + 1
        self.nu = base.nu + 1.0

    def __repr__(self):
        return f"HomogenizedBarrier({self.base!r})"

    def is_interior(self, x):
        return bool(np.isfinite(x[-1]) and x[-1] > INTERIOR_MARGIN
                    and self.base.is_interior(x[:-1]))

    def anchor(self):
        return np.append(self.base.anchor(), 1.0)

    def _value(self, x):
        return self.base._value(x[:-1]) - float(np.log(x[-1]))

    def _gradient(self, x):
        return np.append(self.base._gradient(x[:-1]), -1.0 / x[-1])

    def _hessian(self, x):
        n = self.base.dim
        H = np.zeros((n + 1, n + 1))
        H[:n, :n] = self.base._hessian(x[:-1])
        H[n, n] = 1.0 / x[-1] ** 2
        return H

    def sample_interior(self, rng):
        return np.append(self.base.sample_interior(rng), np.exp(rng.normal(0.0, 0.7)))

    def dual_interior(self, s):
        return bool(s[-1] > 0) and self.base.dual_interior(s[:-1])


def log_barrier_orthant(n: int) -> OrthantBarrier:
    return OrthantBarrier(n)


def exp_cone_barrier() -> ExpConeBarrier:
    return ExpConeBarrier()


def product_barrier(parts: Sequence[BarrierOracle]) -> BarrierOracle:
    """Block-diagonal composition; a single part is returned unchanged."""
    parts = list(parts)
    if len(parts) == 1:
        return parts[0]
    return ProductBarrier(parts)


def homogenize(F: BarrierOracle) -> HomogenizedBarrier:
    return HomogenizedBarrier(F)


@dataclass(frozen=True)
class ConeSpec:
    """Ordered product of primitive cones.

    ``blocks`` is a tuple of ``(kind, dim)`` pairs with ``kind`` one of
    ``"nonneg"`` or ``"exp"``.
    """

    blocks: tuple = field(default_factory=tuple)

    KINDS = ("nonneg", "exp")

    def __post_init__(self):
        blocks = tuple((str(k), int(d)) for k, d in self.blocks)
        for i, (kind, dim) in enumerate(blocks):
            if kind not in self.KINDS:
                raise ConfigurationError(f"cone {i}: unknown kind {kind!r}")
            if dim < 1:
                raise ConfigurationError(f"cone {i}: dimension must be positive")
            if kind == "exp" and dim != 3:
                raise ConfigurationError(f"cone {i}: exponential cone has dimension 3")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def nonneg(cls, n):
        return cls((("nonneg", n),))

    @property
    def dim(self):
        return sum(d for _, d in self.blocks)

    def barrier(self) -> BarrierOracle:
        if not self.blocks:
            raise ConfigurationError("cone specification is empty")
        parts = [OrthantBarrier(d) if k == "nonneg" else ExpConeBarrier()
                 for k, d in self.blocks]
        return product_barrier(parts)


class LocalMetric:
    """Hessian-induced norms at a fixed interior point.

    The Cholesky factor ``H = L L^T`` is computed once; ``norm`` is
    ``||u||_x = ||L^T u||`` and ``dual_norm`` is ``||u||*_x = ||L^{-1} u||``.
    """

    def __init__(self, F: BarrierOracle, x, hessian=None):
        self.center = np.array(x, dtype=float)
        self.hessian = F.hessian(self.center) if hessian is None else hessian
        d = np.diag(self.hessian)
        if not np.any(self.hessian - np.diag(d)):
            if not np.all(d > 0):
                raise ConditioningError("Hessian is not numerically positive definite")
            self.factor = np.diag(np.sqrt(d))
        else:
            try:
                self.factor = np.linalg.cholesky(self.hessian)
            except np.linalg.LinAlgError as exc:
                raise ConditioningError("Hessian is not numerically positive definite") from exc
        d = np.diag(self.factor)
        if not np.all(np.isfinite(d)) or d.min() <= 1e-150 or d.min() / d.max() < 1e-12:
            raise ConditioningError("Hessian factor is numerically singular")

    def norm(self, u) -> float:
        return float(np.linalg.norm(self.factor.T @ u))

    def dual_norm(self, u) -> float:
        return float(np.linalg.norm(sla.solve_triangular(self.factor, u, lower=True)))

    def inner(self, u1, u2) -> float:
        return float(u1 @ (self.hessian @ u2))

    def solve(self, u) -> np.ndarray:
        """Return ``H(x)^{-1} u``."""
        return sla.cho_solve((self.factor, True), u)

    def operator_norm(self, M) -> float:
        """``max{||M u||_x : ||u||_x <= 1}`` as a spectral norm of ``L^T M L^{-T}``."""
        Linv_T = sla.solve_triangular(self.factor, np.eye(len(self.center)), lower=True).T
        return float(np.linalg.norm(self.factor.T @ M @ Linv_T, 2))


def local_metric(F: BarrierOracle, x) -> LocalMetric:
    return LocalMetric(F, x)


def newton_step(F: BarrierOracle, x) -> np.ndarray:
    """``n(x) = -H(x)^{-1} g(x)``."""
    g, H = F.derivatives(x)
    return -LocalMetric(F, x, hessian=H).solve(g)


def conjugate_gradient_inverse(F: BarrierOracle, s, tol=1e-12, max_iter=200, x0=None):
    """Find ``x`` with ``-g(x) = s`` by damped Newton on ``<x, s> + F(x)``.

    The step is full once the Newton decrement is at most 1/4 and
    ``1 / (1 + decrement)`` before that.  Raises :class:`NoConvergence`
    when the cap is reached, which usually means ``s`` is close to the
    boundary of the dual cone.
    """
    s = np.asarray(s, dtype=float)
    x = F.anchor() if x0 is None else np.array(x0, dtype=float)
    for _ in range(max_iter):
        g, H = F.derivatives(x)
        try:
            metric = LocalMetric(F, x, hessian=H)
        except ConditioningError as exc:
            # iterates run off to infinity when s is outside the dual cone
            raise NoConvergence("conjugate inversion diverged") from exc
        r = g + s
        if metric.dual_norm(r) <= tol:
            return x
        step = -metric.solve(r)
        decrement = metric.norm(step)
        t = 1.0 if decrement <= 0.25 else 1.0 / (1.0 + decrement)
        x = x + t * step
    g = F.gradient(x)
    if LocalMetric(F, x).dual_norm(g + s) <= tol:
        return x
    raise NoConvergence(f"conjugate inversion did not converge in {max_iter} iterations")
