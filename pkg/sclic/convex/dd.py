"""
SCLIC: Double description conversion between generators and facets

Polyhedral cones are converted between V-representation (generators) and
H-representation (facet normals within the linear hull). Both directions
reduce to enumerating the extreme rays of a pointed cone { a : H a >= 0 },
which is done incrementally, one inequality at a time, with near-zero
values snapped to exact zero.
"""
import logging

import numpy as np
import scipy.linalg

from ..errors import ScaleExceeded
from ..utils.tolerances import get as get_tolerances
from .cones import ConeRep

LOG = logging.getLogger(__name__)

MAX_AMBIENT_DIM = 8
MAX_GENERATORS = 32

def _unit_rows(arr, snap):
    norms = np.linalg.norm(arr, axis=1)
    arr = arr / norms[:, None]
    arr[np.abs(arr) < snap] = 0
    return arr / np.linalg.norm(arr, axis=1)[:, None]

def _dedupe(rays, tol=1e-9):
    kept = []
    for ray in rays:
        if not any(np.linalg.norm(ray - other) < tol for other in kept):
            kept.append(ray)
    return np.array(kept).reshape(-1, rays.shape[1])

def _rank(rows):
    return np.linalg.matrix_rank(rows) if rows.shape[0] > 0 else 0

def _extreme_rays(ineqs, snap):
    """
    Extreme rays of the pointed cone { a in R^q : H a >= 0 }

    :param ineqs: [r, q] array H of full column rank q
    :return: [k, q] array of unit extreme rays, empty if the cone is {0}
    """
    ineqs = np.atleast_2d(np.asarray(ineqs, dtype=float))
    ineqs = ineqs[np.linalg.norm(ineqs, axis=1) > 0]
    num_ineqs, q = ineqs.shape
    if num_ineqs < q or np.linalg.matrix_rank(ineqs) < q:
        raise ValueError("Inequality system does not define a pointed cone")
    ineqs = _unit_rows(ineqs, 0)

    # Start from a simplicial cone over q independent inequalities
    _, _, pivots = scipy.linalg.qr(ineqs.T, pivoting=True)
    start = np.sort(pivots[:q])
    rays = _unit_rows(np.linalg.inv(ineqs[start]).T, snap)
    processed = list(start)
    LOG.debug(f"DD: {num_ineqs} inequalities in dimension {q}, starting from rows {start.tolist()}")

    for row in range(num_ineqs):
        if row in processed or rays.shape[0] == 0:
            continue
        values = rays @ ineqs[row]
        values[np.abs(values) < snap] = 0
        pos, zero, neg = values > 0, values == 0, values < 0
        new_rays = [rays[pos], rays[zero]]
        if q >= 2 and np.any(pos) and np.any(neg):
            tight = np.abs(rays @ ineqs[processed].T) < snap
            for p_idx in np.flatnonzero(pos):
                for n_idx in np.flatnonzero(neg):
                    common = tight[p_idx] & tight[n_idx]
                    if np.count_nonzero(common) < q - 2:
                        continue
                    if _rank(ineqs[processed][common]) != q - 2:
                        continue
                    combined = values[p_idx] * rays[n_idx] - values[n_idx] * rays[p_idx]
                    new_rays.append(combined[None, :])
        processed.append(row)
        rays = np.vstack(new_rays)
        if rays.shape[0] > 0:
            rays = _dedupe(_unit_rows(rays, snap))
        LOG.debug(f"DD: after row {row}, {rays.shape[0]} rays")
    return rays

def _check_scale(rep, num_vectors, desc):
    if rep.ambient_dim > MAX_AMBIENT_DIM or num_vectors > MAX_GENERATORS:
        raise ScaleExceeded(f"Double description limited to dimension {MAX_AMBIENT_DIM} and {MAX_GENERATORS} "
                            f"{desc}: got dimension {rep.ambient_dim} with {num_vectors} {desc}")

def dd_convert(rep, tolerances=None):
    """
    Compute facet normals of a finitely generated cone

    :param rep: Polyhedral ConeRep with generators
    :return: ConeRep with generators and facets. The facets are unit normals in the hull
             and the cone is { v in hull : <a_j, v> >= 0 for all j }
    :raise ScaleExceeded: Beyond dimension 8 or 32 generators
    """
    tols = get_tolerances(tolerances)
    if not rep.is_polyhedral:
        raise ValueError("Double description needs a finitely generated cone")
    if rep.facets is not None:
        return rep
    _check_scale(rep, len(rep.generators), "generators")
    if rep.dim == 0:
        return rep.with_facets(np.zeros((0, rep.ambient_dim)))

    # Facet normals are the extreme rays of the dual cone, computed in hull coordinates
    hull_gens = rep.hull.coords(rep.generators)
    dual_rays = _extreme_rays(hull_gens, tols.snap)
    facets = rep.hull.lift(dual_rays).reshape(-1, rep.ambient_dim)
    LOG.debug(f"DD: {len(rep.generators)} generators -> {len(facets)} facets in hull of dimension {rep.dim}")
    return rep.with_facets(facets)

def dd_generators(rep, tolerances=None):
    """
    Recover generators from the facet description of a polyhedral cone

    Lineality directions are returned as +/- pairs

    :param rep: ConeRep with facets populated
    :return: [k, n] array of unit generators
    """
    tols = get_tolerances(tolerances)
    if rep.facets is None:
        raise ValueError("Cone has no facet description")
    _check_scale(rep, len(rep.facets), "facets")
    if rep.dim == 0:
        return np.zeros((0, rep.ambient_dim))

    hull_facets = rep.hull.coords(rep.facets).reshape(-1, rep.dim)
    if hull_facets.shape[0] == 0 or not np.any(hull_facets):
        lineality = np.eye(rep.dim)
        pointed = np.zeros((rep.dim, 0))
    else:
        lineality = scipy.linalg.null_space(hull_facets).T
        pointed = scipy.linalg.orth(hull_facets.T)

    rays = []
    if pointed.shape[1] > 0:
        coords = _extreme_rays(hull_facets @ pointed, tols.snap)
        rays.extend(coords @ pointed.T)
    for vec in lineality:
        rays.extend([vec, -vec])
    if not rays:
        return np.zeros((0, rep.ambient_dim))
    gens = rep.hull.lift(np.array(rays))
    return gens / np.linalg.norm(gens, axis=1)[:, None]
