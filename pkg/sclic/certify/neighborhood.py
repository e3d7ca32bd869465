"""
SCLIC: Empirical check that a certificate persists near a map
"""
import logging

import numpy as np

from ..convex.sets import asymptotic_cone
from ..errors import NotApplicable
from ..linalg import LinearMap
from ..utils.tolerances import get as get_tolerances
from ..utils.utils import STREAM_NEIGHBORHOOD, parallel_map, stream_rng
from .certificates import NeighborhoodCheck
from .classify import classify_cone

LOG = logging.getLogger(__name__)

def perturbation(T, radius, rng):
    """
    Random map S with |S - T| < radius in operator norm

    A Gaussian direction is normalised in operator norm and scaled by radius * U^(1/mn),
    the radial law of a uniform sample from an mn-dimensional ball. The samples cover
    the whole operator norm ball but are not uniformly distributed in it.
    """
    direction = rng.standard_normal(T.matrix.shape)
    norm = np.linalg.norm(direction, 2)
    while norm == 0:
        direction = rng.standard_normal(T.matrix.shape)
        norm = np.linalg.norm(direction, 2)
    size = radius * rng.random() ** (1.0 / direction.size)
    return T + direction * (size / norm)

def neighborhood_check(T, X, radius, samples, seed=0, workers=1, tolerances=None, certificate=None):
    """
    Fraction of random maps within the given operator norm radius of T which keep
    the same certificate class

    :param certificate: Certificate of (T, X), computed if not given
    :return: NeighborhoodCheck
    :raise NotApplicable: If (T, X) is not certified
    """
    tols = get_tolerances(tolerances)
    if not radius > 0:
        raise ValueError(f"Neighbourhood radius must be positive, got {radius}")
    if samples < 0:
        raise ValueError(f"Number of samples must be non-negative, got {samples}")
    K = asymptotic_cone(X, tols)
    if certificate is None:
        certificate = classify_cone(T, K, tols, with_payload=False)
    if not certificate.certified:
        raise NotApplicable(f"Neighbourhood check needs a certified map: {certificate}")
    if samples == 0:
        return NeighborhoodCheck(1.0, 0, radius)

    def _same_class(idx):
        rng = stream_rng(seed, STREAM_NEIGHBORHOOD, idx)
        perturbed = perturbation(T, radius, rng)
        return certificate.same_class(classify_cone(perturbed, K, tols, with_payload=False))

    results = parallel_map(_same_class, range(samples), workers)
    fraction = sum(results) / samples
    LOG.info(f"Neighbourhood check at radius {radius:.6e}: {sum(results)}/{samples} keep {certificate.label}")
    return NeighborhoodCheck(fraction, samples, radius)
