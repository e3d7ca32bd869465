"""
SCLIC: Set oracles for porosity estimation

A set is seen only through an oracle: either its Euclidean distance function
or a membership test. Oracles are evaluated on batches of points (rows of a
[k, n] array).
"""
import logging

import numpy as np
import scipy.linalg

from ..linalg import LinearMap, Subspace, kernel_basis, least_norm_solution, orthonormalize
from ..utils.utils import STREAM_LIPSCHITZ, as_vector, stream_rng

LOG = logging.getLogger(__name__)

class SetOracle:
    """
    Base class for set oracles

    :ivar ambient_dim: Dimension n of the space containing the set
    :ivar desc: Human readable description
    """
    kind = None

    def __init__(self, ambient_dim, desc):
        self.ambient_dim = int(ambient_dim)
        self.desc = desc

    def _batch(self, points):
        points = np.asarray(points, dtype=float)
        single = points.ndim == 1
        points = np.atleast_2d(points)
        if points.shape[1] != self.ambient_dim:
            raise ValueError(f"Points of dimension {points.shape[1]} given to {self.desc} in R^{self.ambient_dim}")
        return points, single

    def __repr__(self):
        return f"{type(self).__name__}({self.desc})"

class DistanceOracle(SetOracle):
    """
    Set described by its (1-Lipschitz) distance function
    """
    kind = "distance"

    def __init__(self, ambient_dim, fn, desc="set"):
        SetOracle.__init__(self, ambient_dim, desc)
        self._fn = fn

    def distance(self, points):
        points, single = self._batch(points)
        dist = np.maximum(np.asarray(self._fn(points), dtype=float), 0)
        return float(dist[0]) if single else dist

    __call__ = distance

    def pullback(self, f):
        """
        Oracle for the preimage under a surjective linear map

        dist(x, f^-1(Y)) >= dist(f x, Y) / |f| so this is a lower bound for the distance
        """
        f = f if isinstance(f, LinearMap) else LinearMap(f)
        if f.rows != self.ambient_dim:
            raise ValueError(f"Map into R^{f.rows} cannot pull back a set in R^{self.ambient_dim}")
        scale = f.operator_norm
        return DistanceOracle(f.cols, lambda points: self.distance(points @ f.matrix.T) / scale,
                              f"preimage of {self.desc}")

class MembershipOracle(SetOracle):
    """
    Set described by a membership test
    """
    kind = "membership"

    def __init__(self, ambient_dim, fn, desc="set"):
        SetOracle.__init__(self, ambient_dim, desc)
        self._fn = fn

    def contains(self, points):
        points, single = self._batch(points)
        inside = np.asarray(self._fn(points), dtype=bool)
        return bool(inside[0]) if single else inside

    __call__ = contains

    def pullback(self, f):
        f = f if isinstance(f, LinearMap) else LinearMap(f)
        return MembershipOracle(f.cols, lambda points: self.contains(points @ f.matrix.T),
                                f"preimage of {self.desc}")

class AffineSubspaceOracle(DistanceOracle):
    """
    Exact distance to point + span(directions)
    """

    def __init__(self, point, directions=(), desc=None):
        self.point = as_vector(point, desc="Affine subspace point")
        n = self.point.size
        self.subspace = directions if isinstance(directions, Subspace) else orthonormalize(list(directions), ambient_dim=n)
        if desc is None:
            desc = f"affine subspace of dimension {self.subspace.dim} in R^{n}"
        DistanceOracle.__init__(self, n, self._distance, desc)

    def _distance(self, points):
        return self.subspace.residual(points - self.point)

    def pullback(self, f):
        """
        Exact preimage of the affine subspace under a linear map

        f^-1(p + W) = { x : C f x = C p } where the rows of C span the complement of W
        """
        f = f if isinstance(f, LinearMap) else LinearMap(f)
        if f.rows != self.ambient_dim:
            raise ValueError(f"Map into R^{f.rows} cannot pull back a set in R^{self.ambient_dim}")
        complement = self.subspace.complement()
        if complement.dim == 0:
            return whole_space(f.cols)
        constraint = LinearMap(complement.basis @ f.matrix)
        base = least_norm_solution(constraint, complement.basis @ self.point)
        return AffineSubspaceOracle(base, kernel_basis(constraint), f"preimage of {self.desc}")

def affine_subspace(point, directions=()):
    return AffineSubspaceOracle(point, directions)

def point_set(point):
    return AffineSubspaceOracle(point, desc=f"point {list(point)}")

def line(point, direction):
    return AffineSubspaceOracle(point, [direction], desc="line")

def hyperplane(normal, offset=0.0):
    """
    { x : <normal, x> = offset }
    """
    normal = as_vector(normal, desc="Hyperplane normal")
    unit = normal / np.linalg.norm(normal)
    directions = scipy.linalg.null_space(unit[None, :]).T
    return AffineSubspaceOracle(unit * offset / np.linalg.norm(normal), Subspace(normal.size, directions),
                                desc=f"hyperplane in R^{normal.size}")

def whole_space(dim):
    return DistanceOracle(dim, lambda points: np.zeros(len(points)), f"R^{dim}")

def zero_set_membership(poly, dim, tol):
    """
    Thickened zero set { x : |P(x)| <= tol }

    :param poly: Function mapping [k, n] points to [k] values
    """
    return MembershipOracle(dim, lambda points: np.abs(poly(points)) <= tol, "zero set")

def zero_set_distance(poly, grad, dim, iterations=50, desc="zero set"):
    """
    Distance to a smooth zero set { x : P(x) = 0 } by Newton projection

    Each point is moved along the gradient until P vanishes and the length of the
    move is returned. This is exact when the gradient lines are normal to the
    level sets, as for spheres.

    :param grad: Function mapping [k, n] points to [k, n] gradients
    """

    def _distance(points):
        current = points.copy()
        for _ in range(iterations):
            values = poly(current)
            grads = grad(current)
            sq_norms = np.sum(grads**2, axis=1)
            stuck = sq_norms < 1e-24
            # Critical points of P: nudge off them
            current[stuck, 0] += 1e-9
            step = np.where(stuck, 0, values / np.where(stuck, 1, sq_norms))
            current -= step[:, None] * grads
            if np.all(np.abs(values) < 1e-14):
                break
        return np.linalg.norm(current - points, axis=1)

    return DistanceOracle(dim, _distance, desc)

def circle(radius=1.0):
    """
    Zero set of x^2 + y^2 - r^2 in R^2
    """
    return zero_set_distance(lambda p: np.sum(p**2, axis=1) - radius**2, lambda p: 2 * p, 2,
                             desc=f"circle of radius {radius}")

def rank_deficient(rows, cols):
    """
    Matrices (flattened row-major) without maximal rank

    The Frobenius distance to this set is the smallest singular value
    """
    def _distance(points):
        mats = points.reshape(-1, rows, cols)
        return np.linalg.svd(mats, compute_uv=False)[:, -1]

    return DistanceOracle(rows * cols, _distance, f"rank deficient {rows}x{cols} matrices")

def check_lipschitz(oracle, center, scale=1.0, pairs=1000, seed=0):
    """
    Spot check that a distance oracle is 1-Lipschitz on random pairs of points

    :return: Tuple of (passed, worst ratio |d(a) - d(b)| / |a - b|)
    """
    rng = stream_rng(seed, STREAM_LIPSCHITZ)
    center = as_vector(center, oracle.ambient_dim, "Centre")
    first = center + scale * rng.standard_normal((pairs, oracle.ambient_dim))
    second = first + scale * rng.standard_normal((pairs, oracle.ambient_dim)) * rng.random((pairs, 1))
    gaps = np.linalg.norm(first - second, axis=1)
    ratios = np.abs(oracle.distance(first) - oracle.distance(second)) / np.maximum(gaps, 1e-300)
    worst = float(ratios.max())
    passed = worst <= 1 + 1e-6
    if not passed:
        LOG.warning(f"Distance oracle {oracle.desc} is not 1-Lipschitz: ratio {worst:.6f}")
    return passed, worst
