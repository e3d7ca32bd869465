"""
SCLIC: Useful functions shared by all modules

Random streams, parallel evaluation and small vector helpers
"""
import concurrent.futures
import logging

import numpy as np

LOG = logging.getLogger(__name__)

# Stream tags keep the random streams of different consumers disjoint even
# when they are driven by the same user seed
STREAM_SURVEY = 1
STREAM_NEIGHBORHOOD = 2
STREAM_POROSITY = 3
STREAM_RADIUS_ORACLE = 4
STREAM_WIDTH_DIRECTIONS = 5
STREAM_ANALYTIC_CHECK = 6
STREAM_LIPSCHITZ = 7

def stream_rng(*keys):
    """
    Counter-based random stream

    :param keys: Non-negative integers (or sequences of them) identifying the stream,
                 typically (seed, stream tag, sample index)
    :return: numpy Generator which depends only on the keys
    """
    entropy = []
    for key in keys:
        entropy.extend(int(k) for k in np.atleast_1d(key))
    if any(k < 0 for k in entropy):
        raise ValueError(f"Random stream keys must be non-negative: {entropy}")
    return np.random.default_rng(np.random.SeedSequence(entropy))

def parallel_map(fn, items, workers=1):
    """
    Apply fn to each item, possibly in a thread pool

    The output order always matches the input order so that results do
    not depend on scheduling.

    :param workers: Number of threads. 1 or less means run serially
    :return: List of results
    """
    items = list(items)
    if workers is None or workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    LOG.debug(f"Evaluating {len(items)} items on {workers} threads")
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))

def as_vector(values, dim=None, desc="vector"):
    """
    Convert to a finite 1D float array

    :param dim: Required dimension, if given
    :raise ValueError: If entries are not finite or the dimension is wrong
    """
    vec = np.asarray(values, dtype=float)
    if vec.ndim != 1 or vec.size == 0:
        raise ValueError(f"{desc} must be a non-empty 1D sequence of numbers, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)):
        raise ValueError(f"{desc} has non-finite entries: {vec}")
    if dim is not None and vec.size != dim:
        raise ValueError(f"{desc} has dimension {vec.size}, expected {dim}")
    return vec

def normalize(vec):
    """
    :return: vec / |vec|
    :raise ValueError: If vec is zero
    """
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ValueError("Cannot normalize the zero vector")
    return vec / norm

def angle_between(u, v):
    """
    :return: Angle in [0, pi] between two nonzero vectors
    """
    cos = np.dot(u, v) / (np.linalg.norm(u) * np.linalg.norm(v))
    return float(np.arccos(np.clip(cos, -1.0, 1.0)))

def uniform_ball(rng, count, dim, radius=1.0, center=None):
    """
    Uniform samples from a Euclidean ball

    :return: Array of shape [count, dim]
    """
    directions = rng.standard_normal((count, dim))
    norms = np.linalg.norm(directions, axis=1)
    norms[norms == 0] = 1
    radii = radius * rng.random(count) ** (1.0 / dim)
    points = directions * (radii / norms)[:, None]
    if center is not None:
        points += center
    return points
