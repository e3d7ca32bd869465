"""
SCLIC: Quantitative payloads of certificates

stability_radius_A estimates min{ |Tv| : v in K, |v| = 1 }, the distance
from the origin to the image of the unit slice of the asymptotic cone.

cone_width_delta finds a delta such that every direction of the hull whose
angle to a given interior ray has sine at most delta lies in the cone.
"""
import logging
import math

import numpy as np
import scipy.linalg
import scipy.optimize

from ..convex.cones import SOC, RayDirection, analytic_margin
from ..convex.dd import dd_convert
from ..convex.sets import contains, ri_contains, sample_cone
from ..errors import NotApplicable, RayNotInterior
from ..linalg import orthonormalize
from ..utils.tolerances import get as get_tolerances
from ..utils.utils import STREAM_RADIUS_ORACLE, STREAM_WIDTH_DIRECTIONS, angle_between, stream_rng
from .conditions import cone_kernel_vector, kernel_cone_trivial

LOG = logging.getLogger(__name__)

MAX_FACES = 20000
ORACLE_CHUNK = 16384
MAX_DELTA = 0.999

# Half angle of the circular cone inscribed in the rotated second-order cone
# around its axis: the y directions are the narrowest
RSOC_INSCRIBED_ANGLE = math.atan(1 / math.sqrt(2))

def _faces(K):
    """
    Generator index sets of the nonzero faces of a polyhedral cone

    Faces are intersections of facets, so we close the full generator set under
    intersection with the generators tight at each facet
    """
    units = K.generators / np.linalg.norm(K.generators, axis=1)[:, None]
    tight = [frozenset(np.flatnonzero(row).tolist()) for row in np.abs(K.facets @ units.T) <= 1e-9]
    full = frozenset(range(len(units)))
    faces, frontier = {full}, [full]
    while frontier:
        face = frontier.pop()
        for facet_gens in tight:
            sub = face & facet_gens
            if sub and sub not in faces:
                faces.add(sub)
                frontier.append(sub)
                if len(faces) > MAX_FACES:
                    LOG.warning(f"Cone has more than {MAX_FACES} faces, radius relies on sampling")
                    return None
    return sorted(faces, key=lambda face: (len(face), sorted(face)))

def _face_minimum(K, face, gram):
    """
    Minimum of |Tv| over unit vectors of a face which are critical points on its span

    A minimizer in the relative interior of a face is an eigenvector of T^T T
    compressed to the face span.
    """
    gens = K.generators[sorted(face)]
    span = orthonormalize(list(gens), ambient_dim=K.ambient_dim)
    evals, evecs = scipy.linalg.eigh(span.basis @ gram @ span.basis.T)
    scale = max(1.0, abs(evals[-1]))
    best = np.inf
    start = 0
    while start < len(evals):
        end = start + 1
        while end < len(evals) and evals[end] - evals[start] <= 1e-9 * scale:
            end += 1
        value = math.sqrt(max(evals[start], 0))
        if value < best:
            eigenspace = span.lift(evecs[:, start:end].T)
            if end - start == 1:
                vec = eigenspace[0]
                found = contains(K, vec, 1e-9) or contains(K, -vec, 1e-9)
            else:
                complement = np.eye(K.ambient_dim) - eigenspace.T @ eigenspace
                found = cone_kernel_vector(gens, complement) is not None
            if found:
                best = value
        start = end
    return best

def _polyhedral_minimum(T, K):
    faces = _faces(K)
    if faces is None:
        return np.inf
    gram = T.matrix.T @ T.matrix
    best = min(_face_minimum(K, face, gram) for face in faces)
    LOG.debug(f"Face search over {len(faces)} faces: minimum {best:.6e}")
    return best

def _analytic_minimum(T, K):
    """
    Lower bound for min |Tv|^2 on the unit slice of { v^T Q v >= 0 } from the dual

        max over mu >= 0 of lambda_min(T^T T - mu Q)
    """
    _, form = K.quadratic_form()
    gram = T.matrix.T @ T.matrix
    form_top = scipy.linalg.eigvalsh(form)[-1]
    upper = 2 * np.linalg.norm(gram, 2) / form_top + 1

    def neg_dual(mu):
        return -scipy.linalg.eigvalsh(gram - mu * form)[0]

    res = scipy.optimize.minimize_scalar(neg_dual, bounds=(0, upper), method="bounded",
                                         options={"xatol": 1e-12})
    best = max(-res.fun, -neg_dual(0))
    LOG.debug(f"Dual bound at mu={res.x:.6e}: {best:.6e}")
    return math.sqrt(max(best, 0))

def _oracle_minimum(T, K, samples, seed):
    """
    Minimum of |Tv| over densely sampled unit vectors of the cone
    """
    rng = stream_rng(seed, STREAM_RADIUS_ORACLE)
    best = np.inf
    if K.is_polyhedral:
        units = K.generators / np.linalg.norm(K.generators, axis=1)[:, None]
        best = np.linalg.norm(units @ T.matrix.T, axis=1).min()
    remaining = samples
    while remaining > 0:
        count = min(ORACLE_CHUNK, remaining)
        points = sample_cone(K, rng, count)
        norms = np.linalg.norm(points, axis=1)
        units = points[norms > 0] / norms[norms > 0, None]
        if len(units):
            best = min(best, np.linalg.norm(units @ T.matrix.T, axis=1).min())
        remaining -= count
    return best

def stability_radius_A(T, K, tolerances=None, seed=0):
    """
    Distance from the origin to T(C) where C is the unit slice of the cone

    The local stage is exact for polyhedral cones (eigenvectors on every face) and a
    dual lower bound for analytic cones. It is validated against a dense sampling
    oracle; the smaller value minus a safety slack is returned.

    :return: Non-negative radius, infinite for the zero cone
    :raise NotApplicable: If the cone meets the kernel of T
    """
    tols = get_tolerances(tolerances)
    if not kernel_cone_trivial(T, K, tols).trivial:
        raise NotApplicable("The asymptotic cone meets the kernel of the map")
    if K.is_zero:
        return np.inf

    if K.is_polyhedral:
        local = _polyhedral_minimum(T, dd_convert(K, tols))
    else:
        local = _analytic_minimum(T, K)
    oracle = _oracle_minimum(T, K, tols.oracle_samples, seed)
    if oracle < local - tols.radius_slack * max(1.0, T.operator_norm):
        LOG.warning(f"Sampling oracle found {oracle:.6e} below the local minimum {local:.6e}")
    estimate = min(local, oracle)
    LOG.debug(f"Stability radius: local {local:.6e}, oracle {oracle:.6e}")
    return max(0.0, estimate - tols.radius_slack)

def _circular_cone_inside(form, u, phi):
    """
    Check { v : angle(v, u) <= phi } is inside { v^T Q v >= 0 } using the S-lemma
    """
    shape = np.outer(u, u) - math.cos(phi)**2 * np.eye(u.size)
    upper = 2 / math.sin(phi)**2 + 2

    def neg_min_eig(tau):
        return -scipy.linalg.eigvalsh(form - tau * shape)[0]

    res = scipy.optimize.minimize_scalar(neg_min_eig, bounds=(0, upper), method="bounded",
                                         options={"xatol": 1e-12})
    return -res.fun >= -1e-12

def _check_angle(K, u, phi, ball_points, seed):
    """
    Check random directions at angle phi from u lie in the cone
    """
    rng = stream_rng(seed, STREAM_WIDTH_DIRECTIONS)
    dirs = rng.standard_normal((ball_points, u.size))
    dirs -= np.outer(dirs @ u, u)
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    vecs = math.cos(phi) * u + math.sin(phi) * dirs
    return bool(np.all(analytic_margin(K, vecs) >= -1e-9))

def _analytic_width(K, u, tols, seed):
    """
    Largest half angle of a circular cone around u inside an analytic cone, by bisection
    """
    _, form = K.quadratic_form()
    low, high = 0.0, math.pi / 2
    for _ in range(60):
        mid = (low + high) / 2
        if _circular_cone_inside(form, u, mid):
            low = mid
        else:
            high = mid
    phi = low
    for _ in range(20):
        if phi <= 0 or _check_angle(K, u, phi, tols.width_directions, seed):
            break
        LOG.debug(f"Width check failed at half angle {phi:.6e}, shrinking")
        phi *= 0.99
    return math.sin(phi)

def cone_width_delta(K, u, tolerances=None, seed=0):
    """
    Width of the cone around an interior ray

    :param u: RayDirection in ri(K)
    :return: delta in (0, 1) such that every direction of the hull whose angle to u has
             sine at most delta lies in K. Conservative: not necessarily maximal
    :raise RayNotInterior: If u is not in the relative interior of K
    """
    tols = get_tolerances(tolerances)
    if not isinstance(u, RayDirection):
        u = RayDirection(u)
    u = u.u
    if not ri_contains(K, u, tols.membership):
        raise RayNotInterior(f"Ray {u.tolist()} is not in the relative interior of the cone")

    if K.is_polyhedral:
        K = dd_convert(K, tols)
        delta = float(np.min(K.facets @ u)) if len(K.facets) else MAX_DELTA
    else:
        angle = angle_between(u, K.axis())
        if K.analytic == SOC:
            delta = math.sin(math.pi / 4 - angle)
        elif angle < 1e-12:
            delta = math.sin(RSOC_INSCRIBED_ANGLE)
        else:
            inscribed = math.sin(RSOC_INSCRIBED_ANGLE - angle)
            delta = max(inscribed, _analytic_width(K, u, tols, seed))

    delta = min(delta, MAX_DELTA)
    if delta <= 0:
        raise RayNotInterior(f"Ray {u.tolist()} has no neighbourhood inside the cone")
    LOG.debug(f"Cone width around {u.tolist()}: {delta:.6e}")
    return delta
