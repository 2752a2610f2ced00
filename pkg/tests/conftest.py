import numpy as np
import pytest

from nsipm.barriers import ConeSpec, homogenize
from nsipm.hsd import ConicProblem, HsdPoint, build_g

# printed iterates of the two-variable LP: (x1, x2, tau, y, s1, s2, kappa)
PREDICTOR_POINT = (0.9310, 0.6995, 0.8511, 0.0224, 0.8246, 1.0891, 0.9023)
CORRECTOR_POINT = (0.9830, 0.9304, 0.9670, 0.0042, 0.9650, 1.0176, 0.9810)


def make_point(values):
    x1, x2, tau, y, s1, s2, kappa = values
    return HsdPoint(np.array([x1, x2, tau]), np.array([y]), np.array([s1, s2, kappa]))


@pytest.fixture
def small_lp():
    """``min 2 x1 + 3 x2  s.t.  5 x1 - 3 x2 = 12, x >= 0``; optimum x = (2.4, 0)."""
    return ConicProblem(np.array([[5.0, -3.0]]), np.array([12.0]), np.array([2.0, 3.0]),
                        ConeSpec.nonneg(2))


@pytest.fixture
def lp_setup(small_lp):
    return small_lp, build_g(small_lp), homogenize(small_lp.barrier())


@pytest.fixture
def predictor_point():
    return make_point(PREDICTOR_POINT)


@pytest.fixture
def corrector_point():
    return make_point(CORRECTOR_POINT)
