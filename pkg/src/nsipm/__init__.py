"""Predictor-corrector interior-point method for nonsymmetric conic programs.

Solves ``min c^T x  s.t.  A x = b, x in K`` where ``K`` is a product of
nonnegative orthants and exponential cones, through the homogeneous
self-dual embedding, and ships a numerical verifier for the inequalities
behind the step-size analysis.
"""

from .barriers import (
    ConeSpec,
    LocalMetric,
    conjugate_gradient_inverse,
    exp_cone_barrier,
    homogenize,
    local_metric,
    log_barrier_orthant,
    newton_step,
    product_barrier,
)
from .errors import (
    ConditioningError,
    ConfigurationError,
    DegeneratePoint,
    InteriorViolation,
    InvariantViolation,
    NoConvergence,
    NsipmError,
    ParameterError,
    ProblemFileError,
)
from .hsd import ConicProblem, HsdPoint, build_g, in_neighborhood, mu, proximity, psi, residual
from .io import parse_problem, serialize
from .solver import SolveOutcome, SolverParams, solve
from .steps import corrector_direction, predictor_direction, step_constants

__version__ = "0.1.0"

__all__ = [
    "ConeSpec", "LocalMetric", "conjugate_gradient_inverse", "exp_cone_barrier", "homogenize",
    "local_metric", "log_barrier_orthant", "newton_step", "product_barrier",
    "ConditioningError", "ConfigurationError", "DegeneratePoint", "InteriorViolation",
    "InvariantViolation", "NoConvergence", "NsipmError", "ParameterError", "ProblemFileError",
    "ConicProblem", "HsdPoint", "build_g", "in_neighborhood", "mu", "proximity", "psi", "residual",
    "parse_problem", "serialize", "SolveOutcome", "SolverParams", "solve",
    "corrector_direction", "predictor_direction", "step_constants",
]
