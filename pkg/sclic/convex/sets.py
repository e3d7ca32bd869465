"""
SCLIC: Supported closed convex sets

Set descriptions, membership and relative interior oracles, asymptotic
cones and random sampling of cones
"""
import logging

import numpy as np

from ..errors import EmptySet, ZeroCone
from ..lp import LpProblem, Optimal, lp_solve
from ..utils.tolerances import get as get_tolerances
from ..utils.utils import as_vector, normalize
from .cones import RSOC, SOC, ConeRep, RayDirection
from .dd import dd_convert

LOG = logging.getLogger(__name__)

class ConvexSet:
    """
    Base class for closed convex set descriptions
    """
    kind = None

    @property
    def ambient_dim(self):
        raise NotImplementedError()

class Polyhedron(ConvexSet):
    """
    conv(points) + cone(rays)
    """
    kind = "polyhedron"

    def __init__(self, points, rays=(), ambient_dim=None):
        points, rays = list(points), list(rays)
        if ambient_dim is None:
            if not points and not rays:
                raise ValueError("Ambient dimension needed for an empty polyhedron")
            ambient_dim = len((points or rays)[0])
        self._dim = int(ambient_dim)
        self.points = np.array([as_vector(p, self._dim, "Polyhedron point") for p in points]).reshape(-1, self._dim)
        self.rays = np.array([as_vector(r, self._dim, "Polyhedron ray") for r in rays]).reshape(-1, self._dim)
        if np.any(np.linalg.norm(self.rays, axis=1) == 0):
            raise ValueError("Polyhedron rays must be nonzero")
        self.points.setflags(write=False)
        self.rays.setflags(write=False)

    @property
    def ambient_dim(self):
        return self._dim

    def __repr__(self):
        return f"Polyhedron(points={self.points.tolist()}, rays={self.rays.tolist()})"

class PolyhedralCone(ConvexSet):
    kind = "polyhedral_cone"

    def __init__(self, rep):
        if not rep.is_polyhedral:
            raise ValueError("PolyhedralCone needs a finitely generated cone")
        self.rep = rep

    @classmethod
    def from_generators(cls, generators, ambient_dim=None):
        return cls(ConeRep.from_generators(generators, ambient_dim))

    @classmethod
    def orthant(cls, dim):
        return cls(ConeRep(dim, np.eye(dim)))

    @property
    def ambient_dim(self):
        return self.rep.ambient_dim

    def __repr__(self):
        return f"PolyhedralCone({self.rep.generators.tolist()})"

class SecondOrderCone(ConvexSet):
    """
    { (w, z) : z >= |w| }
    """
    kind = "soc"

    def __init__(self, dim):
        self.rep = ConeRep.second_order(dim)

    @property
    def ambient_dim(self):
        return self.rep.ambient_dim

    def __repr__(self):
        return f"SecondOrderCone({self.ambient_dim})"

class RotatedSecondOrderCone(ConvexSet):
    """
    { (x, y, z) : x, z >= 0, xz >= |y|^2 }
    """
    kind = "rsoc"

    def __init__(self, dim):
        self.rep = ConeRep.rotated_second_order(dim)

    @property
    def ambient_dim(self):
        return self.rep.ambient_dim

    def __repr__(self):
        return f"RotatedSecondOrderCone({self.ambient_dim})"

class Translate(ConvexSet):
    """
    base + offset. Nested translates are flattened
    """
    kind = "translate"

    def __init__(self, base, offset):
        offset = as_vector(offset, base.ambient_dim, "Translate offset")
        if isinstance(base, Translate):
            offset = offset + base.offset
            base = base.base
        self.base = base
        self.offset = offset
        self.offset.setflags(write=False)

    @property
    def ambient_dim(self):
        return self.base.ambient_dim

    def __repr__(self):
        return f"Translate({self.base}, {self.offset.tolist()})"

def _check_dim(obj, v):
    return as_vector(v, obj.ambient_dim, "Point")

def asymptotic_cone(X, tolerances=None):
    """
    Asymptotic cone of a supported set

    Polyhedral cones are returned with their facet description populated

    :return: ConeRep
    :raise EmptySet: For a polyhedron without points
    """
    if isinstance(X, Translate):
        return asymptotic_cone(X.base, tolerances)
    if isinstance(X, Polyhedron):
        if len(X.points) == 0:
            raise EmptySet("Polyhedron has no points")
        rep = ConeRep(X.ambient_dim, X.rays)
    elif isinstance(X, (PolyhedralCone, SecondOrderCone, RotatedSecondOrderCone)):
        rep = X.rep
    elif isinstance(X, ConeRep):
        rep = X
    else:
        raise ValueError(f"Unsupported set description: {X}")
    if rep.is_polyhedral:
        rep = dd_convert(rep, tolerances)
    LOG.debug(f"Asymptotic cone of {X}: {rep} with hull dimension {rep.dim}")
    return rep

def _residual_lp(points, rays, v):
    """
    Smallest L1 residual of v - (convex combination of points + conic combination of rays)

    If points is None, v is matched by a conic combination of the rays only
    """
    n = v.size
    num_points = 0 if points is None else len(points)
    num_rays = len(rays)
    columns = [np.zeros((n, 0))] if points is None else [points.T]
    columns += [rays.T, np.eye(n), -np.eye(n)]
    a_eq = np.hstack(columns)
    b_eq = v
    if points is not None:
        convexity = np.concatenate([np.ones(num_points), np.zeros(num_rays + 2 * n)])
        a_eq = np.vstack([a_eq, convexity])
        b_eq = np.append(v, 1.0)
    objective = np.concatenate([np.zeros(num_points + num_rays), -np.ones(2 * n)])
    outcome = lp_solve(LpProblem(objective, a_eq, b_eq))
    if not isinstance(outcome, Optimal):
        return np.inf
    return -outcome.value

def contains(X, v, tol=None):
    """
    Membership oracle

    Tolerances are relative to max(1, |v|)

    :param X: ConvexSet or ConeRep
    :return: True if v lies in X within tolerance
    """
    tol = get_tolerances().membership if tol is None else tol
    v = _check_dim(X, v)
    scale = max(1.0, np.linalg.norm(v))
    if isinstance(X, Translate):
        return contains(X.base, v - X.offset, tol)
    if isinstance(X, Polyhedron):
        if len(X.points) == 0:
            return False
        return _residual_lp(X.points, X.rays, v) <= tol * scale
    if isinstance(X, ConvexSet):
        return contains(X.rep, v, tol)

    if X.analytic == SOC:
        return v[-1] >= np.linalg.norm(v[:-1]) - tol * scale
    if X.analytic == RSOC:
        x, y, z = v[0], v[1:-1], v[-1]
        return x >= -tol * scale and z >= -tol * scale and x * z >= np.dot(y, y) - tol * scale**2
    if X.is_zero:
        return np.linalg.norm(v) <= tol * scale
    if X.facets is None:
        return _residual_lp(None, X.generators, v) <= tol * scale
    if X.hull.residual(v) > tol * scale:
        return False
    return bool(np.all(X.facets @ v >= -tol * scale))

def ri_contains(K, v, tol=None):
    """
    Relative interior oracle for cones

    The zero vector is never in the relative interior of a cone here
    since we are interested in rays
    """
    tol = get_tolerances().membership if tol is None else tol
    v = _check_dim(K, v)
    norm = np.linalg.norm(v)
    if norm == 0:
        return False
    if K.analytic == SOC:
        return v[-1] > np.linalg.norm(v[:-1]) + tol * norm
    if K.analytic == RSOC:
        x, y, z = v[0], v[1:-1], v[-1]
        return x > tol * norm and z > tol * norm and x * z > np.dot(y, y) + tol * norm**2
    if K.is_zero:
        return False
    K = dd_convert(K)
    if K.hull.residual(v) > tol * norm:
        return False
    return bool(np.all(K.facets @ v > tol * norm))

def ri_point(K):
    """
    Direction in the relative interior of a nonzero cone

    :return: RayDirection
    :raise ZeroCone: If K = {0}
    """
    if K.analytic == SOC:
        u = np.zeros(K.ambient_dim)
        u[-1] = 1
        return RayDirection(u)
    if K.analytic == RSOC:
        return RayDirection(K.axis())
    if K.is_zero:
        raise ZeroCone("The zero cone has no relative interior ray")
    units = K.generators / np.linalg.norm(K.generators, axis=1)[:, None]
    total = units.sum(axis=0)
    if np.linalg.norm(total) < 1e-12:
        # Generators cancel only when the cone is its own hull
        LOG.debug("Generators sum to zero, cone is a subspace")
        return RayDirection(K.hull.basis[0])
    return RayDirection(normalize(total))

def sample_cone(K, rng, count):
    """
    Random points of a cone

    Polyhedral cones are sampled as non-negative combinations of random subsets of
    generators so that faces get sampled too. Analytic cones get a mixture of
    boundary and interior points.

    :return: Array of shape [count, n]
    """
    n = K.ambient_dim
    if K.is_polyhedral:
        if K.is_zero:
            return np.zeros((count, n))
        k = len(K.generators)
        weights = rng.exponential(size=(count, k))
        weights *= rng.random((count, k)) < 0.5
        empty = ~np.any(weights > 0, axis=1)
        weights[empty, rng.integers(0, k, size=np.count_nonzero(empty))] = 1
        return weights @ K.generators

    # Sample the Lorentz cone { (w, s) : s >= |w| }, boundary for half the points
    lorentz_w = rng.standard_normal((count, n - 1))
    excess = rng.exponential(size=count) * (rng.random(count) < 0.5)
    lorentz_s = np.linalg.norm(lorentz_w, axis=1) * (1 + excess)
    if K.analytic == SOC:
        return np.column_stack([lorentz_w, lorentz_s])
    # RSOC with s = x + z, w = (2y, x - z)
    x = (lorentz_s + lorentz_w[:, -1]) / 2
    z = (lorentz_s - lorentz_w[:, -1]) / 2
    return np.column_stack([x, lorentz_w[:, :-1] / 2, z])

def polyhedral_image(T, X):
    """
    Image of a polyhedral set under a linear map

    The image of conv(P) + cone(R) is conv(T P) + cone(T R) which is always closed

    :return: Polyhedron in R^m
    """
    if T.cols != X.ambient_dim:
        raise ValueError(f"Map with {T.cols} columns applied to a set in R^{X.ambient_dim}")
    offset = np.zeros(X.ambient_dim)
    if isinstance(X, Translate):
        offset = X.offset
        X = X.base
    if isinstance(X, PolyhedralCone):
        points, rays = np.zeros((1, X.ambient_dim)), X.rep.generators
    elif isinstance(X, Polyhedron):
        points, rays = X.points, X.rays
    else:
        raise ValueError(f"Not a polyhedral set: {X}")
    image_points = (points + offset) @ T.matrix.T
    image_rays = rays @ T.matrix.T
    nonzero = np.linalg.norm(image_rays, axis=1) > 1e-12 * max(1.0, T.operator_norm)
    return Polyhedron(image_points, image_rays[nonzero], ambient_dim=T.rows)
