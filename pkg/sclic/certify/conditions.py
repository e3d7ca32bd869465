"""
SCLIC: Kernel conditions on asymptotic cones

Tests whether the kernel of a map meets an asymptotic cone only at zero,
or passes through its relative interior, and the rank of the map on the
cone's hull. Polyhedral cones are handled by small LPs over the generator
weights, analytic cones by an eigenvalue problem for their quadratic form
restricted to the kernel.
"""
import collections
import logging

import numpy as np
import scipy.linalg

from ..convex.cones import analytic_margin
from ..convex.dd import dd_convert
from ..convex.sets import ri_contains
from ..linalg import Subspace, kernel_basis, project_onto, rank_with_tol, restrict
from ..lp import LpProblem, Optimal, is_feasible, lp_solve
from ..utils.tolerances import get as get_tolerances
from ..utils.utils import STREAM_ANALYTIC_CHECK, stream_rng

LOG = logging.getLogger(__name__)

KernelCone = collections.namedtuple("KernelCone", ["trivial", "witness"])
RelIntRay = collections.namedtuple("RelIntRay", ["nonempty", "ray"])

def kernel_in_hull(T, K, tolerances=None):
    """
    Numerical kernel of T restricted to the linear hull of K

    :return: Subspace of R^n
    """
    tols = get_tolerances(tolerances)
    TY = restrict(T, K.hull)
    if TY is None:
        return Subspace(K.ambient_dim)
    null = kernel_basis(TY, tols.rank)
    return Subspace(K.ambient_dim, K.hull.lift(null.basis).reshape(-1, K.ambient_dim))

def cone_kernel_vector(generators, constraint, tolerances=None):
    """
    Find a nonzero v in cone(generators) with constraint @ v = 0

    Any nonzero vector of the cone has positive inner product with some generator, so
    we solve one LP per generator:

        lambda >= 0, constraint G lambda = 0, <g_i, G lambda> = 1

    :param generators: [k, n] array G
    :param constraint: [r, n] array
    :return: The vector v = G lambda or None if the cone meets the kernel only at zero
    """
    tols = get_tolerances(tolerances)
    k = len(generators)
    if k == 0:
        return None
    mapped = np.atleast_2d(constraint) @ generators.T
    gram = generators @ generators.T
    for idx in range(k):
        a_eq = np.vstack([mapped, gram[idx]])
        b_eq = np.append(np.zeros(mapped.shape[0]), 1.0)
        weights = is_feasible(a_eq, b_eq, tol=tols.lp)
        if weights is not None:
            LOG.debug(f"Kernel cone LP feasible for generator {idx}")
            return weights @ generators
    return None

def _kernel_quadratic(K, kernel):
    """
    Top eigenpair of the cone's quadratic form restricted to the kernel

    :return: Tuple of (eigenvalue, unit vector oriented along the cone axis)
    """
    axis, form = K.quadratic_form()
    restricted = kernel.basis @ form @ kernel.basis.T
    evals, evecs = scipy.linalg.eigh(restricted)
    vec = kernel.lift(evecs[:, -1])
    if np.dot(axis, vec) < 0:
        vec = -vec
    return evals[-1], vec / np.linalg.norm(vec)

def kernel_cone_trivial(T, K, tolerances=None):
    """
    Check whether the asymptotic cone meets the kernel of T only at zero

    :return: KernelCone namedtuple (trivial, witness). The witness is a unit vector
             of the cone in the kernel when trivial is False
    """
    tols = get_tolerances(tolerances)
    if K.is_zero:
        return KernelCone(True, None)
    kernel = kernel_in_hull(T, K, tols)
    if kernel.dim == 0:
        LOG.debug("Map is injective on the hull of the cone")
        return KernelCone(True, None)

    if K.is_polyhedral:
        vec = cone_kernel_vector(K.generators, T.matrix, tols)
        if vec is None:
            return KernelCone(True, None)
        vec = project_onto(vec, kernel)
        return KernelCone(False, vec / np.linalg.norm(vec))

    # For a nonzero v with v^T Q v >= 0 either v or -v lies in the cone
    top, vec = _kernel_quadratic(K, kernel)
    LOG.debug(f"Largest value of the cone form on the kernel: {top:.3e}")
    if top >= -tols.membership:
        return KernelCone(False, vec)
    return KernelCone(True, None)

def _sampled_interior_ray(K, kernel, tols):
    """
    Best interior margin of random unit kernel vectors
    """
    rng = stream_rng(0, STREAM_ANALYTIC_CHECK, kernel.dim)
    coords = rng.standard_normal((tols.width_directions, kernel.dim))
    vecs = kernel.lift(coords)
    vecs /= np.linalg.norm(vecs, axis=1)[:, None]
    vecs = np.vstack([vecs, -vecs])
    margins = analytic_margin(K, vecs)
    best = np.argmax(margins)
    return margins[best], vecs[best]

def ri_kernel_nonempty(T, K, tolerances=None):
    """
    Check whether the kernel of T meets the relative interior of the cone

    :return: RelIntRay namedtuple (nonempty, ray) where ray is a unit vector of
             ri(K) in the kernel, if found
    """
    tols = get_tolerances(tolerances)
    if K.is_zero:
        return RelIntRay(False, None)
    kernel = kernel_in_hull(T, K, tols)
    if kernel.dim == 0:
        return RelIntRay(False, None)

    if K.is_polyhedral:
        vec = _polyhedral_interior_vector(T, dd_convert(K, tols), kernel, tols)
    else:
        top, vec = _kernel_quadratic(K, kernel)
        sampled_margin, sampled_vec = _sampled_interior_ray(K, kernel, tols)
        if top <= tols.membership:
            if sampled_margin > tols.membership:
                LOG.warning(f"Sampling found an interior kernel ray missed by the eigenvalue test "
                            f"(margin {sampled_margin:.3e}, form value {top:.3e})")
                vec = sampled_vec
            else:
                vec = None
        elif sampled_margin <= 0:
            LOG.debug("Interior kernel ray not found by sampling - thin cone section")

    if vec is None:
        return RelIntRay(False, None)
    if not ri_contains(K, vec, tols.membership):
        LOG.debug(f"Candidate kernel ray {vec} is not in the relative interior")
        return RelIntRay(False, None)
    return RelIntRay(True, vec)

def _polyhedral_interior_vector(T, K, kernel, tols):
    """
    LP: maximize s subject to T G lambda = 0, lambda_i >= s, s <= 1
    """
    if len(K.facets) == 0:
        # The cone is its own hull so every nonzero vector is interior
        return kernel.basis[0].copy()

    gens = K.generators
    k = len(gens)
    m = T.rows
    # Variables: lambda (k), s (1), rho (k), tau (1)
    num_vars = 2 * k + 2
    a_eq = np.zeros((m + k + 1, num_vars))
    a_eq[:m, :k] = T.matrix @ gens.T
    a_eq[m:m + k, :k] = np.eye(k)
    a_eq[m:m + k, k] = -1
    a_eq[m:m + k, k + 1:2 * k + 1] = -np.eye(k)
    a_eq[-1, k] = a_eq[-1, -1] = 1
    b_eq = np.zeros(m + k + 1)
    b_eq[-1] = 1
    objective = np.zeros(num_vars)
    objective[k] = 1
    lower = np.zeros(num_vars)
    lower[k] = -np.inf

    outcome = lp_solve(LpProblem(objective, a_eq, b_eq, lower), tols.lp)
    if not isinstance(outcome, Optimal):
        LOG.warning(f"Interior kernel LP did not solve: {outcome}")
        return None
    slack = outcome.value
    LOG.debug(f"Interior kernel LP slack: {slack:.3e}")
    if slack <= tols.kernel:
        return None
    vec = project_onto(outcome.solution[:k] @ gens, kernel)
    norm = np.linalg.norm(vec)
    if norm <= tols.kernel:
        return None
    return vec / norm

def rank_restriction(T, Y, tolerances=None):
    """
    Rank of T restricted to a subspace

    :return: Numerical rank, 0 for the zero subspace
    """
    tols = get_tolerances(tolerances)
    TY = restrict(T, Y)
    if TY is None:
        return 0
    return rank_with_tol(TY, tols.rank)
