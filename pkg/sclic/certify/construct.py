"""
SCLIC: Explicit constructions from certificates

 - preimage_witness: for a map with an interior kernel ray, an explicit
   preimage inside the asymptotic cone of any target
 - repair: a nearby map whose kernel passes through the relative interior
   of the asymptotic cone
"""
import logging
import math

import numpy as np

from ..convex.sets import asymptotic_cone, contains, ri_point
from ..errors import NotApplicable, NotCertifiedB, NumericFailure
from ..linalg import LinearMap, least_norm_solution, restrict
from ..utils.tolerances import get as get_tolerances
from ..utils.utils import angle_between, as_vector, normalize
from .certificates import PreimageWitness, RelIntKernel, Uncertified, UncertifiedReason
from .classify import classify

LOG = logging.getLogger(__name__)

PREIMAGE_TOL = 1e-8

def preimage_witness(T, X, y, margin=0.01, tolerances=None, certificate=None):
    """
    Explicit preimage of y in the asymptotic cone of X

    The least norm solution x of T x = y within the hull is orthogonal to the kernel
    ray u, so x + t u lies within the cone neighbourhood of u once t is large enough.

    :param certificate: Optional certificate of (T, X), computed if not given
    :return: PreimageWitness
    :raise NotCertifiedB: If (T, X) does not have an interior kernel ray certificate
    """
    tols = get_tolerances(tolerances)
    if not margin > 0:
        raise ValueError(f"Margin must be positive, got {margin}")
    y = as_vector(y, T.rows, "Target")
    if certificate is None:
        certificate = classify(T, X, tols)
    if not isinstance(certificate, RelIntKernel) or certificate.delta is None:
        raise NotCertifiedB(f"Map is not certified with an interior kernel ray: {certificate}")

    K = asymptotic_cone(X, tols)
    coords = least_norm_solution(restrict(T, K.hull), y, tols.residual)
    x_min = K.hull.lift(coords)
    norm = np.linalg.norm(x_min)
    delta, u = certificate.delta, certificate.ray.u
    if norm > 0:
        t = norm * math.sqrt((1 - delta**2) / delta**2) * (1 + margin)
    else:
        t = margin
    w = x_min + t * u

    scale = max(1.0, np.linalg.norm(y))
    residual = np.linalg.norm(T(w) - y)
    if residual > PREIMAGE_TOL * scale:
        raise NumericFailure(f"Preimage residual {residual:.3e} exceeds {PREIMAGE_TOL * scale:.3e}")
    if not contains(K, w, PREIMAGE_TOL):
        raise NumericFailure(f"Preimage {w.tolist()} is not in the asymptotic cone")
    LOG.debug(f"Preimage of {y.tolist()}: t={t:.6e}, w={w.tolist()}")
    return PreimageWitness(x_min, t, w, delta, margin)

def repair_map(T, v_star, v_k):
    """
    T composed with the projection along v_k onto the hyperplane orthogonal to v_star

    Kills v_k and agrees with T on the hyperplane. If T v_star = 0 the change in
    operator norm is at most |T| tan(angle(v_k, v_star)).

    :return: LinearMap
    """
    cos = np.dot(v_k, v_star)
    if cos <= 0:
        raise NumericFailure("Repair direction is not within 90 degrees of the witness")
    return LinearMap(T.matrix - np.outer(T(v_k), v_star) / cos)

def repair(T, X, eps, tolerances=None):
    """
    Nearby map with an interior kernel ray

    The witness v* of an uncertified map is tilted towards the relative interior of
    the asymptotic cone and the map is modified to kill the tilted direction.

    :param eps: Tilt in (0, 1). Smaller values give maps closer to T
    :return: LinearMap
    :raise NotApplicable: If T is certified or rank deficient on the hull
    """
    tols = get_tolerances(tolerances)
    if not 0 < eps < 1:
        raise ValueError(f"Repair parameter must be in (0, 1), got {eps}")
    certificate = classify(T, X, tols, with_payload=False)
    if not isinstance(certificate, Uncertified) or certificate.reason != UncertifiedReason.KERNEL_TOUCHES_BOUNDARY:
        raise NotApplicable(f"Repair applies only to maps whose kernel touches the cone boundary: {certificate}")
    if certificate.witness is None:
        raise NotApplicable("No kernel witness available to repair")

    K = asymptotic_cone(X, tols)
    v_star = normalize(certificate.witness)
    v_k = normalize((1 - eps) * v_star + eps * ri_point(K).u)
    repaired = repair_map(T, v_star, v_k)

    scale = max(1.0, T.operator_norm)
    if np.linalg.norm(repaired(v_k)) > 1e-9 * scale:
        raise NumericFailure(f"Repaired map does not kill the tilted direction: {np.linalg.norm(repaired(v_k)):.3e}")
    change = (repaired - T).operator_norm
    bound = T.operator_norm * math.tan(angle_between(v_k, v_star)) + 1e-9
    if change > bound:
        raise NumericFailure(f"Repair changed the map by {change:.6e}, above the bound {bound:.6e}")
    recheck = classify(repaired, X, tols, cone=K, with_payload=False)
    if not recheck.certified:
        raise NumericFailure(f"Repaired map is not certified: {recheck}")
    LOG.info(f"Repaired map with eps={eps}: change {change:.6e} <= bound {bound:.6e}, now {recheck.label}")
    return repaired
