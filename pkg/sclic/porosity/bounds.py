"""
SCLIC: Porosity of preimages under surjective linear maps

If f: R^n -> R^m is surjective and Y is porous at y = f(x) then f^-1(Y) is
porous at x with

    p(x, f^-1(Y)) >= c p(y, Y) / 2M

where nu is the smallest semi-axis of the image of the unit ball,
c = min(nu, 1) and M = max(|f|, 1/c).
"""
import logging

from ..errors import NotSurjective
from ..linalg import LinearMap, least_norm_solution, rank_with_tol, smallest_singular_value
from ..utils.tolerances import get as get_tolerances
from ..utils.utils import as_vector
from .estimate import porosity_estimate

LOG = logging.getLogger(__name__)

BOUND_SLACK = 0.05

class PreimageBoundInputs:
    """
    Constants of the preimage porosity bound

    :ivar nu_f: Smallest nonzero singular value of f, the reciprocal of the norm of the
                inverse of f on the complement of its kernel
    :ivar c: min(nu_f, 1)
    :ivar M: max(|f|, 1/c)
    :ivar p_y: Porosity of the target set at y
    """

    def __init__(self, f, p_y, tolerances=None):
        tols = get_tolerances(tolerances)
        self.f = f if isinstance(f, LinearMap) else LinearMap(f)
        if rank_with_tol(self.f, tols.rank) < self.f.rows:
            raise NotSurjective(f"Map of rank {rank_with_tol(self.f, tols.rank)} onto R^{self.f.rows} is not surjective")
        if p_y < 0:
            raise ValueError(f"Porosity must be non-negative, got {p_y}")
        self.nu_f = smallest_singular_value(self.f)
        self.c = min(self.nu_f, 1.0)
        self.M = max(self.f.operator_norm, 1 / self.c)
        self.p_y = p_y

    def to_dict(self):
        return {"nu_f": self.nu_f, "c": self.c, "M": self.M, "p_y": self.p_y}

def preimage_porosity_bound(inputs):
    """
    :return: c p_y / 2M
    """
    return inputs.c * inputs.p_y / (2 * inputs.M)

class PreimageCheck(dict):
    """
    Result of comparing the measured porosity of a preimage with the bound
    """

    def __init__(self, measured, bound, p_y, inputs):
        dict.__init__(self, measured=measured, bound=bound, p_y=p_y,
                      **{k: v for k, v in inputs.to_dict().items() if k != "p_y"})
        self["pass"] = measured >= bound - BOUND_SLACK

    @property
    def measured(self):
        return self["measured"]

    @property
    def bound(self):
        return self["bound"]

    @property
    def passed(self):
        return self["pass"]

def verify_preimage_porosity(f, target, y, budget=100000, seed=0, radii=None, tolerances=None):
    """
    Measure porosity of f^-1(Y) at a preimage of y and compare with the bound

    The porosity of Y at y is estimated with the same budget and schedule.

    :param target: Oracle for Y in R^m, with a pullback() method
    :return: PreimageCheck
    """
    tols = get_tolerances(tolerances)
    f = f if isinstance(f, LinearMap) else LinearMap(f)
    y = as_vector(y, f.rows, "Target point")
    x = least_norm_solution(f, y, tols.residual)
    p_y = porosity_estimate(y, target, radii, budget, seed).p_hat
    inputs = PreimageBoundInputs(f, p_y, tols)
    bound = preimage_porosity_bound(inputs)
    measured = porosity_estimate(x, target.pullback(f), radii, budget, seed).p_hat
    check = PreimageCheck(measured, bound, p_y, inputs)
    LOG.info(f"Preimage porosity {measured:.4f} vs bound {bound:.4f} (p_y={p_y:.4f}): "
             f"{'pass' if check.passed else 'FAIL'}")
    return check
