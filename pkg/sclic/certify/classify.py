"""
SCLIC: Classification of a linear map against a closed convex set

Case split on p = dim of the hull Y of the asymptotic cone K:

 - T restricted to Y without maximal rank: no certificate
 - p <= m: T is one-to-one on Y so K meets the kernel only at zero
 - otherwise the kernel condition, then the relative interior condition
"""
import logging
import math

from ..convex.cones import RayDirection
from ..convex.sets import asymptotic_cone
from ..errors import InputError
from ..linalg import restrict, smallest_singular_value
from ..utils.tolerances import get as get_tolerances
from .certificates import KernelTrivial, RelIntKernel, Uncertified, UncertifiedReason
from .conditions import kernel_cone_trivial, rank_restriction, ri_kernel_nonempty
from .radius import cone_width_delta, stability_radius_A

LOG = logging.getLogger(__name__)

def classify(T, X, tolerances=None, cone=None, with_payload=True, seed=0):
    """
    Classify a map against a set

    :param T: LinearMap
    :param X: ConvexSet
    :param cone: Optional precomputed asymptotic cone of X
    :param with_payload: If False, the stability radius and cone width are not
                         computed (set to None) which is much faster when only the
                         certificate class is needed
    :return: Certificate
    """
    tols = get_tolerances(tolerances)
    if T.cols != X.ambient_dim:
        raise InputError(f"Map with {T.cols} columns does not act on a set in R^{X.ambient_dim}")
    if cone is None:
        cone = asymptotic_cone(X, tols)
    return classify_cone(T, cone, tols, with_payload, seed)

def _kernel_trivial(T, K, tols, with_payload, seed):
    if not with_payload:
        return KernelTrivial()
    if K.is_zero:
        return KernelTrivial(math.inf)
    # The certificate persists while both the kernel condition and the rank of T on
    # the hull persist
    radius = min(stability_radius_A(T, K, tols, seed), smallest_singular_value(restrict(T, K.hull)))
    if radius <= 0:
        LOG.warning("Kernel condition holds only marginally: no positive stability radius")
        return Uncertified(UncertifiedReason.KERNEL_TOUCHES_BOUNDARY)
    return KernelTrivial(radius)

def classify_cone(T, K, tolerances=None, with_payload=True, seed=0):
    """
    Classify a map against an asymptotic cone

    :return: Certificate
    """
    tols = get_tolerances(tolerances)
    m, p = T.rows, K.dim
    if p == 0:
        LOG.debug("Bounded set: asymptotic cone is {0}")
        return _kernel_trivial(T, K, tols, with_payload, seed)

    rank = rank_restriction(T, K.hull, tols)
    LOG.debug(f"m={m}, p={p}, rank on hull={rank}")
    if rank < min(m, p):
        return Uncertified(UncertifiedReason.RANK_DEFICIENT_ON_Y)
    if p <= m:
        return _kernel_trivial(T, K, tols, with_payload, seed)

    kernel = kernel_cone_trivial(T, K, tols)
    if kernel.trivial:
        return _kernel_trivial(T, K, tols, with_payload, seed)

    relint = ri_kernel_nonempty(T, K, tols)
    if relint.nonempty:
        ray = RayDirection(relint.ray)
        delta = cone_width_delta(K, ray, tols, seed) if with_payload else None
        return RelIntKernel(ray, delta, rank)
    return Uncertified(UncertifiedReason.KERNEL_TOUCHES_BOUNDARY, kernel.witness)
