"""
SCLIC: Genericity survey and non-closed image demonstration

The survey draws random maps with iid standard normal entries and classifies
each against a fixed set. Maps without a certificate form a null set so the
uncertified fraction should be close to zero.
"""
import logging
import math
import time

import numpy as np

from .certify.certificates import KernelTrivial, RelIntKernel
from .certify.classify import classify, classify_cone
from .certify.construct import preimage_witness, repair
from .certify.neighborhood import neighborhood_check
from .convex.sets import RotatedSecondOrderCone, asymptotic_cone, contains
from .data import set_to_dict
from .errors import InputError, NumericFailure, ScaleExceeded
from .linalg import LinearMap
from .report import SurveyReport
from .utils.tolerances import get as get_tolerances
from .utils.utils import STREAM_SURVEY, parallel_map, stream_rng

LOG = logging.getLogger(__name__)

MAX_DIM = 8
RELINT_RECHECK_RADIUS = 1e-3

def random_map(m, n, seed, index):
    """
    Map with iid standard normal entries from the stream of a survey sample
    """
    rng = stream_rng(seed, STREAM_SURVEY, index)
    return LinearMap(rng.standard_normal((m, n)))

def survey(X, m, samples, seed=0, tolerances=None, recheck_every=100, recheck_samples=20, workers=1):
    """
    Classify random maps against a set

    :param recheck_every: Run a neighbourhood check on certified samples whose index is a
                          multiple of this. 0 disables rechecks
    :param recheck_samples: Perturbations per neighbourhood check
    :return: SurveyReport
    :raise ScaleExceeded: If the ambient dimension is above 8
    """
    tols = get_tolerances(tolerances)
    n = X.ambient_dim
    if samples < 1:
        raise InputError(f"Survey needs at least one sample, got {samples}")
    if n > MAX_DIM:
        raise ScaleExceeded(f"Survey limited to dimension {MAX_DIM}, got {n}")
    if not 1 <= m <= n:
        raise InputError(f"Survey needs 1 <= m <= n, got m={m}, n={n}")

    start = time.time()
    K = asymptotic_cone(X, tols)
    LOG.info(f"Survey of {samples} maps R^{n} -> R^{m} against {X}")

    def _sample(index):
        T = random_map(m, n, seed, index)
        certificate = classify_cone(T, K, tols, seed=seed)
        if isinstance(certificate, KernelTrivial):
            value = certificate.radius
        elif isinstance(certificate, RelIntKernel):
            value = certificate.delta
        else:
            value = np.nan

        fraction = None
        if certificate.certified and recheck_every and index % recheck_every == 0:
            if isinstance(certificate, KernelTrivial):
                radius = 0.5 * (certificate.radius if math.isfinite(certificate.radius) else T.operator_norm)
            else:
                radius = RELINT_RECHECK_RADIUS
            fraction = neighborhood_check(T, X, radius, recheck_samples, seed, tolerances=tols,
                                          certificate=certificate).fraction
        passed = None if fraction is None else bool(fraction == 1.0)
        return (index, certificate.label, value, passed), fraction

    results = parallel_map(_sample, range(samples), workers)
    rows = [row for row, _ in results]
    persistence = [fraction for _, fraction in results if fraction is not None]
    report = SurveyReport(set_to_dict(X), m, n, seed, rows, persistence, time.time() - start)
    LOG.info(f"Survey fractions: {report.fractions}")
    return report

class WitnessSequence:
    """
    Points of a set whose images converge to a point outside the image

    :ivar ks: Sequence parameters k = 1..K
    :ivar points: Points w_k of the set
    :ivar images: Images T(w_k)
    :ivar limit: Limit of the images
    :ivar not_in_image: True if the limit is not in the image
    """

    def __init__(self, ks, points, images, limit, not_in_image, certificate=None, repaired=None, preimage=None):
        self.ks = list(ks)
        self.points = np.asarray(points)
        self.images = np.asarray(images)
        self.limit = np.asarray(limit)
        self.not_in_image = not_in_image
        self.certificate = certificate
        self.repaired = repaired
        self.preimage = preimage

    @property
    def gaps(self):
        """Distances between consecutive images"""
        return np.linalg.norm(np.diff(self.images, axis=0), axis=1)

    def to_dict(self):
        ret = {
            "k": self.ks,
            "points": self.points.tolist(),
            "images": self.images.tolist(),
            "limit": self.limit.tolist(),
            "not_in_image": self.not_in_image,
            "limit_distance": float(np.linalg.norm(self.images[-1] - self.limit)),
        }
        if self.certificate is not None:
            ret["certificate"] = self.certificate.to_dict()
        if self.repaired is not None:
            ret["repaired_map"] = self.repaired.matrix.tolist()
        if self.preimage is not None:
            ret["repaired_preimage"] = self.preimage.to_dict()
        return ret

def _in_projected_rsoc_image(point):
    """
    Image of RSOC(3) under (x, y, z) -> (y, z) is { z > 0 } union { (0, 0) }
    """
    y, z = point
    return z > 0 or (y == 0 and z == 0)

def witness_nonclosed_demo(K=10, repair_eps=0.01, tolerances=None):
    """
    Classical non-closed linear image

    w_k = (k, 1, 1/k) lie in the rotated second-order cone and their projections
    (1, 1/k) converge to (1, 0) which is not in the projected cone. The pair is
    uncertified; after repair the limit has an explicit preimage.

    :param K: Number of sequence points, at least 3
    :param repair_eps: Repair parameter, or None to skip the repair
    :return: WitnessSequence
    """
    tols = get_tolerances(tolerances)
    if K < 3:
        raise InputError(f"Witness sequence needs at least 3 points, got {K}")
    X = RotatedSecondOrderCone(3)
    T = LinearMap([[0, 1, 0], [0, 0, 1]])
    ks = list(range(1, K + 1))
    points = np.array([[k, 1, 1 / k] for k in ks], dtype=float)
    for point in points:
        if not contains(X, point, tols.membership):
            raise NumericFailure(f"Sequence point {point} is not in the cone")
    images = points @ T.matrix.T
    limit = np.array([1.0, 0.0])
    certificate = classify(T, X, tols)

    repaired, preimage = None, None
    if repair_eps is not None:
        repaired = repair(T, X, repair_eps, tols)
        preimage = preimage_witness(repaired, X, limit, tolerances=tols)
    seq = WitnessSequence(ks, points, images, limit, not _in_projected_rsoc_image(limit),
                          certificate, repaired, preimage)
    LOG.info(f"Images approach {limit.tolist()} to within {np.linalg.norm(images[-1] - limit):.3e}; "
             f"limit in image: {not seq.not_in_image}; certificate {certificate}")
    return seq
