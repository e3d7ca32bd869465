"""
SCLIC: Dense real linear algebra primitives

Linear maps, orthonormal subspaces, singular-value based rank and distance
oracles and least-norm solves. Everything here is a pure function of its
inputs and the value types are read-only after construction.
"""
import functools
import logging

import numpy as np
import scipy.linalg

from .errors import Inconsistent
from .utils import tolerances
from .utils.utils import as_vector

LOG = logging.getLogger(__name__)

def _frozen(arr):
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr

class LinearMap:
    """
    Linear map R^n -> R^m stored as a dense m x n matrix

    The operator norm is computed on first use and cached
    """

    def __init__(self, entries):
        matrix = np.array(entries, dtype=float)
        if matrix.ndim == 1:
            matrix = matrix[None, :]
        if matrix.ndim != 2 or matrix.size == 0:
            raise ValueError(f"Linear map entries must form a non-empty 2D array, got shape {matrix.shape}")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("Linear map has non-finite entries")
        self.matrix = _frozen(matrix)

    @property
    def rows(self):
        return self.matrix.shape[0]

    @property
    def cols(self):
        return self.matrix.shape[1]

    @functools.cached_property
    def singular_values(self):
        """Singular values in decreasing order, min(m, n) of them"""
        return _frozen(scipy.linalg.svdvals(self.matrix))

    @property
    def operator_norm(self):
        return float(self.singular_values[0])

    def __call__(self, v):
        return self.matrix @ np.asarray(v, dtype=float)

    def __matmul__(self, other):
        if isinstance(other, LinearMap):
            return LinearMap(self.matrix @ other.matrix)
        return self.matrix @ np.asarray(other, dtype=float)

    def __add__(self, other):
        return LinearMap(self.matrix + np.asarray(getattr(other, "matrix", other), dtype=float))

    def __sub__(self, other):
        return LinearMap(self.matrix - np.asarray(getattr(other, "matrix", other), dtype=float))

    def __mul__(self, scalar):
        return LinearMap(float(scalar) * self.matrix)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LinearMap) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self):
        return f"LinearMap({self.matrix.tolist()})"

class Subspace:
    """
    Linear subspace of R^n given by an orthonormal basis

    The basis is stored as the rows of a (dim x n) array
    """

    def __init__(self, ambient_dim, basis=None, tol=None):
        if ambient_dim < 1:
            raise ValueError(f"Ambient dimension must be positive, got {ambient_dim}")
        self.ambient_dim = int(ambient_dim)
        if basis is None or len(basis) == 0:
            basis = np.zeros((0, self.ambient_dim))
        basis = np.atleast_2d(np.asarray(basis, dtype=float))
        if basis.shape[1] != self.ambient_dim:
            raise ValueError(f"Basis vectors have dimension {basis.shape[1]}, expected {self.ambient_dim}")
        tol = tolerances.get().orthogonality if tol is None else tol
        gram = basis @ basis.T
        if not np.allclose(gram, np.eye(len(basis)), rtol=0, atol=max(tol, 1e-12) * 10):
            raise ValueError("Subspace basis is not orthonormal")
        self.basis = _frozen(basis)

    @property
    def dim(self):
        return self.basis.shape[0]

    @classmethod
    def full(cls, ambient_dim):
        return cls(ambient_dim, np.eye(ambient_dim))

    def project_onto(self, v):
        return project_onto(v, self)

    def project_complement(self, v):
        return project_complement(v, self)

    def residual(self, v):
        """
        :return: Distance of v (or each row of v) from the subspace
        """
        return np.linalg.norm(project_complement(v, self), axis=-1)

    def complement(self):
        """
        :return: Orthogonal complement as a Subspace
        """
        if self.dim == 0:
            return Subspace.full(self.ambient_dim)
        comp = scipy.linalg.null_space(self.basis)
        return Subspace(self.ambient_dim, comp.T)

    def coords(self, v):
        """
        :return: Coordinates of v in this subspace's basis
        """
        return np.asarray(v, dtype=float) @ self.basis.T

    def lift(self, coords):
        """
        :return: Ambient vector from coordinates in this subspace's basis
        """
        return np.asarray(coords, dtype=float) @ self.basis

    def __repr__(self):
        return f"Subspace(ambient_dim={self.ambient_dim}, dim={self.dim})"

def operator_norm(A):
    """
    :return: Largest singular value of A
    """
    return A.operator_norm

def rank_with_tol(A, eps_rel=None):
    """
    Numerical rank

    :param eps_rel: Relative threshold in (0, 1), defaults to the rank tolerance
    :return: Number of singular values larger than eps_rel * sigma_max, 0 for the zero map
    """
    if eps_rel is None:
        eps_rel = tolerances.get().rank
    if not 0 < eps_rel < 1:
        raise ValueError(f"Relative rank tolerance must be in (0, 1), got {eps_rel}")
    svals = A.singular_values if isinstance(A, LinearMap) else scipy.linalg.svdvals(np.atleast_2d(A))
    if svals.size == 0 or svals[0] == 0:
        return 0
    return int(np.count_nonzero(svals > eps_rel * svals[0]))

def smallest_singular_value(A):
    """
    Smallest of the min(m, n) singular values

    By Eckart-Young this is the distance (operator or Frobenius norm) from A
    to the set of matrices without maximal rank
    """
    return float(A.singular_values[-1])

def kernel_basis(A, eps_rel=None):
    """
    Orthonormal basis of the numerical kernel

    :return: Subspace of R^n
    """
    matrix = A.matrix if isinstance(A, LinearMap) else np.atleast_2d(A)
    n = matrix.shape[1]
    rank = rank_with_tol(A, eps_rel)
    _, _, vt = scipy.linalg.svd(matrix, full_matrices=True)
    return Subspace(n, vt[rank:])

def least_norm_solution(A, y, tol=None, eps_rel=None):
    """
    Minimum norm solution of A x = y

    :param tol: Accepted residual relative to max(1, |y|)
    :raise Inconsistent: If y is not in the range of A within tolerance
    """
    tols = tolerances.get()
    tol = tols.residual if tol is None else tol
    matrix = A.matrix if isinstance(A, LinearMap) else np.atleast_2d(np.asarray(A, dtype=float))
    y = as_vector(y, matrix.shape[0], "target")
    u, s, vt = scipy.linalg.svd(matrix, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        x = np.zeros(matrix.shape[1])
    else:
        keep = s > (tols.rank if eps_rel is None else eps_rel) * s[0]
        x = vt[keep].T @ ((u[:, keep].T @ y) / s[keep])
    residual = np.linalg.norm(matrix @ x - y)
    scale = max(1.0, np.linalg.norm(y))
    if residual > tol * scale:
        raise Inconsistent(f"Target is not in the range of the map: residual {residual:.3e} > {tol * scale:.3e}")
    return x

def orthonormalize(vectors, ambient_dim=None, tol=None):
    """
    Orthonormal basis of the span of the given vectors

    Modified Gram-Schmidt with one re-orthogonalization pass. Vectors whose
    residual falls below tol times their norm are dropped as dependent.

    :param ambient_dim: Required if vectors is empty
    :return: Subspace
    """
    tol = tolerances.get().orthogonality if tol is None else tol
    vectors = [np.asarray(v, dtype=float) for v in vectors]
    if not vectors:
        if ambient_dim is None:
            raise ValueError("Ambient dimension needed to orthonormalize an empty set of vectors")
        return Subspace(ambient_dim)
    dim = vectors[0].size if ambient_dim is None else ambient_dim
    basis = []
    for vec in vectors:
        if vec.size != dim:
            raise ValueError(f"Vector of dimension {vec.size} in a set of dimension {dim}")
        norm = np.linalg.norm(vec)
        if norm == 0:
            continue
        residual = vec.copy()
        for _ in range(2):
            for b in basis:
                residual -= np.dot(b, residual) * b
        res_norm = np.linalg.norm(residual)
        if res_norm < tol * norm:
            LOG.debug(f"Dropping dependent vector {vec}")
            continue
        basis.append(residual / res_norm)
    return Subspace(dim, np.array(basis) if basis else None)

def project_onto(v, W):
    """
    Orthogonal projection onto a subspace. v may be a single vector or rows of vectors
    """
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != W.ambient_dim:
        raise ValueError(f"Vector of dimension {v.shape[-1]} projected onto subspace of R^{W.ambient_dim}")
    return (v @ W.basis.T) @ W.basis

def project_complement(v, W):
    """
    Orthogonal projection onto the orthogonal complement of a subspace
    """
    return np.asarray(v, dtype=float) - project_onto(v, W)

def restrict(A, W):
    """
    Matrix of A restricted to W in the coordinates of W's basis

    :return: LinearMap R^dim(W) -> R^m, or None if W is the zero subspace
    """
    if W.dim == 0:
        return None
    return LinearMap(A.matrix @ W.basis.T)
