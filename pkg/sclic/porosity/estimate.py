"""
SCLIC: Monte-Carlo porosity estimation

gamma(x, R, X) is the radius of the largest ball inside B_R(x) which misses X
and the porosity p(x, X) is the liminf of gamma / R as R -> 0. Both are
estimated from below by sampling candidate ball centres.
"""
import logging

import numpy as np

from ..utils.utils import STREAM_POROSITY, as_vector, stream_rng, uniform_ball

LOG = logging.getLogger(__name__)

CHUNK = 4096
MEMBERSHIP_CHUNK = 256
MEMBERSHIP_LEVELS = 6
MIN_BUDGET = 100
DEFAULT_LEVELS = 11
SMALLEST_RADII = 3

class PorosityEstimate:
    """
    Porosity estimate at a point

    :ivar center: Point x
    :ivar radii: Strictly decreasing radius schedule
    :ivar gamma_hat: Estimated gamma for each radius
    :ivar p_hat: Minimum of gamma_hat / R over the three smallest radii
    :ivar budget: Number of candidate centres per radius
    """

    def __init__(self, center, radii, gamma_hat, budget):
        self.center = center
        self.radii = np.asarray(radii, dtype=float)
        self.gamma_hat = np.asarray(gamma_hat, dtype=float)
        self.budget = budget
        ratios = self.gamma_hat[-SMALLEST_RADII:] / self.radii[-SMALLEST_RADII:]
        self.p_hat = float(ratios.min())

    def to_dict(self):
        return {
            "center": [float(v) for v in self.center],
            "radii": self.radii.tolist(),
            "gamma_hat": self.gamma_hat.tolist(),
            "p_hat": self.p_hat,
            "budget": int(self.budget),
        }

    def __repr__(self):
        return f"PorosityEstimate(p_hat={self.p_hat}, budget={self.budget})"

def _chunk_rng(seed, radius_index, chunk):
    return stream_rng(seed, STREAM_POROSITY, radius_index, chunk)

def _chunk_centers(rng, x, radius, count, chunk_size):
    """
    Uniform candidate centres in B_R(x)

    The random draws always cover a whole chunk so that a larger budget only ever
    adds candidates
    """
    offsets = uniform_ball(rng, chunk_size, x.size, radius)[:count]
    return x + offsets, np.linalg.norm(offsets, axis=1)

def _gamma_distance(x, radius, oracle, budget, seed, radius_index):
    best = 0.0
    for chunk, start in enumerate(range(0, budget, CHUNK)):
        count = min(CHUNK, budget - start)
        rng = _chunk_rng(seed, radius_index, chunk)
        centers, offsets = _chunk_centers(rng, x, radius, count, CHUNK)
        room = np.minimum(oracle.distance(centers), radius - offsets)
        best = max(best, float(room.max(initial=0)))
    return best

def _gamma_membership(x, radius, oracle, budget, seed, radius_index, ball_points):
    """
    For each candidate centre, the largest ball of a halving ladder which fits in
    B_R(x) and in which no sample point (or the centre) hits the set
    """
    n = x.size
    best = 0.0
    for chunk, start in enumerate(range(0, budget, MEMBERSHIP_CHUNK)):
        count = min(MEMBERSHIP_CHUNK, budget - start)
        rng = _chunk_rng(seed, radius_index, chunk)
        centers, offsets = _chunk_centers(rng, x, radius, count, MEMBERSHIP_CHUNK)
        dirs = rng.standard_normal((MEMBERSHIP_CHUNK, MEMBERSHIP_LEVELS, ball_points, n))[:count]
        scales = rng.random((MEMBERSHIP_CHUNK, MEMBERSHIP_LEVELS, ball_points))[:count] ** (1.0 / n)
        dirs *= (scales / np.maximum(np.linalg.norm(dirs, axis=-1), 1e-300))[..., None]

        free = ~oracle.contains(centers)
        room = radius - offsets
        found = np.zeros(count)
        for level in range(MEMBERSHIP_LEVELS):
            ball = room / 2**level
            samples = centers[:, None, :] + ball[:, None, None] * dirs[:, level]
            hits = oracle.contains(samples.reshape(-1, n)).reshape(count, ball_points)
            empty = free & ~np.any(hits, axis=1) & (found == 0)
            found[empty] = ball[empty]
        best = max(best, float(found.max(initial=0)))
    return best

def gamma_estimate(x, R, oracle, budget, seed=0, radius_index=0, ball_points=32):
    """
    Lower estimate of gamma(x, R, X)

    :param budget: Number of candidate centres, at least 100
    :param radius_index: Index of R in a radius schedule, selects an independent random stream
    :param ball_points: Sample points per ball for membership oracles
    :return: Estimate in [0, R]
    """
    x = as_vector(x, oracle.ambient_dim, "Centre")
    if not R > 0:
        raise ValueError(f"Radius must be positive, got {R}")
    if budget < MIN_BUDGET:
        raise ValueError(f"Sampling budget must be at least {MIN_BUDGET}, got {budget}")
    if oracle.kind == "distance":
        gamma = _gamma_distance(x, R, oracle, budget, seed, radius_index)
    else:
        gamma = _gamma_membership(x, R, oracle, budget, seed, radius_index, ball_points)
    return min(gamma, R)

def radius_schedule(R0=1.0, levels=DEFAULT_LEVELS):
    """
    :return: Radii R0 * 2^-i for i = 0 .. levels - 1
    """
    return R0 * 0.5 ** np.arange(levels)

def porosity_estimate(x, oracle, radii=None, budget=100000, seed=0):
    """
    Estimate porosity at a point

    The point does not have to lie on the set

    :param radii: Strictly decreasing schedule with at least 4 radii,
                  defaults to 1, 1/2, ..., 2^-10
    :return: PorosityEstimate
    """
    x = as_vector(x, oracle.ambient_dim, "Centre")
    radii = radius_schedule() if radii is None else np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size < 4:
        raise ValueError(f"Need at least 4 radii, got {radii.size}")
    if np.any(radii <= 0) or np.any(np.diff(radii) >= 0):
        raise ValueError("Radii must be positive and strictly decreasing")
    gamma_hat = [gamma_estimate(x, R, oracle, budget, seed, idx) for idx, R in enumerate(radii)]
    estimate = PorosityEstimate(x, radii, gamma_hat, budget)
    LOG.info(f"Porosity of {oracle.desc} at {x.tolist()}: {estimate.p_hat:.4f}")
    return estimate
