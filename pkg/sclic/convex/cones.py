"""
SCLIC: Cone representations

A ConeRep describes a closed convex cone either by generators (V-rep,
optionally with facet normals within the linear hull) or analytically as a
second-order / rotated second-order cone. Analytic cones are written as

    { v : a.v >= 0, v^T Q v >= 0 }

with Q of Lorentz signature, which gives closed forms for the kernel
conditions and for the stability radius.
"""
import logging

import numpy as np

from ..linalg import Subspace, orthonormalize
from ..utils.utils import as_vector

LOG = logging.getLogger(__name__)

SOC = "soc"
RSOC = "rsoc"

class RayDirection:
    """
    Open ray from the origin, stored as its unit direction
    """

    def __init__(self, u, tol=1e-12):
        u = as_vector(u, desc="ray direction")
        norm = np.linalg.norm(u)
        if abs(norm - 1) > tol:
            if norm == 0:
                raise ValueError("Ray direction must be nonzero")
            u = u / norm
        self.u = u
        self.u.setflags(write=False)

    @classmethod
    def through(cls, v):
        """Ray through a nonzero vector"""
        v = as_vector(v, desc="ray direction")
        return cls(v / np.linalg.norm(v))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.u, dtype=dtype)

    def __repr__(self):
        return f"RayDirection({self.u.tolist()})"

class ConeRep:
    """
    Finitely generated or analytic closed convex cone

    :ivar ambient_dim: n
    :ivar generators: [k, n] array of nonzero generators (empty for analytic cones)
    :ivar facets: [f, n] array of unit facet normals lying in the hull, or None if
                  not yet computed (see dd.dd_convert)
    :ivar hull: Linear hull of the cone as a Subspace
    :ivar analytic: None, SOC or RSOC
    """

    def __init__(self, ambient_dim, generators=None, facets=None, hull=None, analytic=None):
        self.ambient_dim = int(ambient_dim)
        if self.ambient_dim < 1:
            raise ValueError(f"Cone ambient dimension must be positive, got {ambient_dim}")
        if analytic not in (None, SOC, RSOC):
            raise ValueError(f"Unknown analytic cone type: {analytic}")
        self.analytic = analytic

        if generators is None or len(generators) == 0:
            generators = np.zeros((0, self.ambient_dim))
        generators = np.atleast_2d(np.asarray(generators, dtype=float))
        if generators.shape[1] != self.ambient_dim:
            raise ValueError(f"Generators have dimension {generators.shape[1]}, expected {self.ambient_dim}")
        if not np.all(np.isfinite(generators)):
            raise ValueError("Cone generators must be finite")
        if np.any(np.linalg.norm(generators, axis=1) == 0):
            raise ValueError("Cone generators must be nonzero")
        if analytic is not None and len(generators) > 0:
            raise ValueError("Analytic cones do not take generators")
        self.generators = generators
        self.generators.setflags(write=False)

        if hull is None:
            if analytic is not None:
                hull = Subspace.full(self.ambient_dim)
            else:
                hull = orthonormalize(list(generators), ambient_dim=self.ambient_dim)
        elif hull.ambient_dim != self.ambient_dim:
            raise ValueError(f"Hull lives in R^{hull.ambient_dim}, expected R^{self.ambient_dim}")
        self.hull = hull

        tol = 1e-10
        if len(generators) > 0:
            residual = hull.residual(generators) / np.linalg.norm(generators, axis=1)
            if np.any(residual > tol):
                raise ValueError(f"Hull does not contain the generators (residual {residual.max():.3e})")

        if facets is not None:
            facets = np.atleast_2d(np.asarray(facets, dtype=float)).reshape(-1, self.ambient_dim)
            if len(generators) > 0 and len(facets) > 0:
                margins = (facets @ generators.T) / np.linalg.norm(generators, axis=1)
                if np.any(margins < -tol):
                    raise ValueError(f"Generator violates a facet inequality by {-margins.min():.3e}")
            facets.setflags(write=False)
        self.facets = facets

    @classmethod
    def from_generators(cls, generators, ambient_dim=None):
        generators = list(generators)
        if ambient_dim is None:
            if not generators:
                raise ValueError("Ambient dimension needed for a cone without generators")
            ambient_dim = len(generators[0])
        return cls(ambient_dim, generators)

    @classmethod
    def zero(cls, ambient_dim):
        return cls(ambient_dim, facets=np.zeros((0, ambient_dim)))

    @classmethod
    def second_order(cls, dim):
        if dim < 2:
            raise ValueError(f"Second-order cone needs dimension >= 2, got {dim}")
        return cls(dim, analytic=SOC)

    @classmethod
    def rotated_second_order(cls, dim):
        if dim < 3:
            raise ValueError(f"Rotated second-order cone needs dimension >= 3, got {dim}")
        return cls(dim, analytic=RSOC)

    @property
    def dim(self):
        """Dimension of the linear hull"""
        return self.hull.dim

    @property
    def is_zero(self):
        return self.analytic is None and len(self.generators) == 0

    @property
    def is_polyhedral(self):
        return self.analytic is None

    def quadratic_form(self):
        """
        Quadratic description of an analytic cone

        :return: Tuple of (axis functional a, symmetric matrix Q) such that the cone is
                 { v : a.v >= 0, v^T Q v >= 0 }
        """
        n = self.ambient_dim
        axis = np.zeros(n)
        form = np.zeros((n, n))
        if self.analytic == SOC:
            # (w, z) : z >= |w|
            axis[-1] = 1
            form[np.diag_indices(n)] = -1
            form[-1, -1] = 1
        elif self.analytic == RSOC:
            # (x, y, z) : x, z >= 0, xz >= |y|^2
            axis[0] = axis[-1] = 1
            form[np.diag_indices(n)] = -1
            form[0, 0] = form[-1, -1] = 0
            form[0, -1] = form[-1, 0] = 0.5
        else:
            raise ValueError("Quadratic form is only defined for analytic cones")
        return axis, form

    def axis(self):
        """
        :return: Unit axis direction of an analytic cone
        """
        axis, _ = self.quadratic_form()
        return axis / np.linalg.norm(axis)

    def with_facets(self, facets):
        """
        :return: Copy of this cone with facet normals attached
        """
        return ConeRep(self.ambient_dim, self.generators, facets, self.hull, self.analytic)

    def __repr__(self):
        if self.analytic:
            return f"ConeRep({self.analytic}, n={self.ambient_dim})"
        return f"ConeRep(n={self.ambient_dim}, generators={self.generators.tolist()}, dim={self.dim})"

def _analytic_margin(cone, points):
    """
    Margin of points against an analytic cone: axis component minus norm of the
    orthogonal part, computed in the frame where the cone is a Lorentz cone
    """
    points = np.atleast_2d(points)
    if cone.analytic == SOC:
        return points[:, -1] - np.linalg.norm(points[:, :-1], axis=1)
    x, y, z = points[:, 0], points[:, 1:-1], points[:, -1]
    # xz >= |y|^2 with x, z >= 0  <=>  x + z >= |(2y, x - z)|
    return (x + z - np.sqrt(4 * np.sum(y**2, axis=1) + (x - z)**2)) / np.sqrt(2)

def analytic_margin(cone, v):
    """
    Concave, positively homogeneous margin of an analytic cone

    Non-negative exactly on the cone and positive exactly on its interior
    """
    margins = _analytic_margin(cone, v)
    return margins if np.ndim(v) > 1 else float(margins[0])
